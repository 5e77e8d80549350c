"""Minimal sequential NN engine: tensors are numpy arrays, layers are explicit
forward/backward pairs, and there is no autodiff graph beyond the layer chain."""

from .gradcheck import check_gradients
from .layers import LayerSpec, conv2d, dense, dropout, linear_output, maxpool, relu
from .network import Network, loss_and_gradients, mse_loss
from .optim import SGD, Adam, NonFiniteGradientError
from .serialize import ModelParseError, load_network, save_network

__all__ = [
    "Adam", "SGD", "NonFiniteGradientError",
    "LayerSpec", "Network",
    "conv2d", "maxpool", "dense", "linear_output", "relu", "dropout",
    "mse_loss", "loss_and_gradients", "check_gradients",
    "save_network", "load_network", "ModelParseError",
]
