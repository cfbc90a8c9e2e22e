from .layers import (
    BiLSTM,
    Conv1d,
    Dense,
    Embedding,
    LSTM,
    MaxOverTime,
    MaxPool1d,
    Module,
    Parameter,
    ReLU,
    SoftmaxCrossEntropy,
    TokenConv1d,
    check_finite,
    cross_entropy,
    glorot_uniform,
    relu,
    softmax,
)
from .optim import RmsProp

__all__ = [
    "BiLSTM",
    "Conv1d",
    "Dense",
    "Embedding",
    "LSTM",
    "MaxOverTime",
    "MaxPool1d",
    "Module",
    "Parameter",
    "ReLU",
    "RmsProp",
    "SoftmaxCrossEntropy",
    "TokenConv1d",
    "check_finite",
    "cross_entropy",
    "glorot_uniform",
    "relu",
    "softmax",
]
