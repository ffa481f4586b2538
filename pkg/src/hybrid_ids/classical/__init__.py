from ._checks import SingleClassError
from .kernels import KernelSpec, gamma_scale, kernel_eval, kernel_matrix
from .logreg import LogRegModel, loss_and_grad, predict_logreg, sigmoid, train_logreg
from .serialize import load_model, save_model
from .svm import SvmModel, dual_objective, full_alphas, kkt_audit, predict_svm, train_svm_smo

__all__ = [
    "KernelSpec",
    "LogRegModel",
    "SingleClassError",
    "SvmModel",
    "dual_objective",
    "full_alphas",
    "gamma_scale",
    "kernel_eval",
    "kernel_matrix",
    "kkt_audit",
    "load_model",
    "loss_and_grad",
    "predict_logreg",
    "predict_svm",
    "save_model",
    "sigmoid",
    "train_logreg",
    "train_svm_smo",
]
