"""Reverse-mode tape, losses, optimizer and the training loop.

Import the submodules directly; the engine depends on ``dropgnn.training.tape``.
"""
