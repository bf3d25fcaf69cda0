"""Dataflow matrix machines: typed linear streams wired by a self-editable sparse matrix."""

from .core import (
    INPUT,
    OUTPUT,
    NeuronType,
    PortName,
    Signature,
    StreamKind,
    compare_ports,
    inport,
    outport,
    port_kind,
    validate_name,
)
from .engine import (
    SELF_IN,
    SELF_OUT,
    Machine,
    SetWeight,
    TraceRecord,
    UpdateWeights,
    default_signature,
    new_machine,
)
from .matrix import MaskVector, NetMatrix, UpdateSpec, all_ones, update_kernel
from .neurons import Registry, Transform, register_type
from .streams import SignedSample, linear_combine, scale_value, zero_value

__version__ = "0.1.0"
