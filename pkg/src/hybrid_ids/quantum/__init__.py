from .circuit import (
    VqcWeights,
    angle_encode,
    apply_strongly_entangling,
    embed,
    embed_batch,
    embed_state,
    embedding_gates,
    init_weights,
    read_embeddings,
    read_weights,
    write_embeddings,
    write_weights,
)
from .oracle import dense_unitary_oracle
from .statevector import (
    QuantumState,
    apply_cnot,
    apply_ry,
    apply_rot,
    apply_rz,
    expval_z,
    expval_z_all,
    new_state,
    run_gates,
)

__all__ = [
    "QuantumState",
    "VqcWeights",
    "angle_encode",
    "apply_cnot",
    "apply_rot",
    "apply_ry",
    "apply_rz",
    "apply_strongly_entangling",
    "dense_unitary_oracle",
    "embed",
    "embed_batch",
    "embed_state",
    "embedding_gates",
    "expval_z",
    "expval_z_all",
    "init_weights",
    "new_state",
    "read_embeddings",
    "read_weights",
    "run_gates",
    "write_embeddings",
    "write_weights",
]
