from __future__ import annotations

from bisched.reductions.gadgets import GadgetKind, LemmaReport, verify_gadgets
from bisched.reductions.lift import lift_unit_processing
from bisched.reductions.maxcut import (
    GadgetIndex,
    GadgetParams,
    MaxCutReduction,
    decode_maxcut,
    encode_maxcut,
    gen_maxcut,
)
from bisched.reductions.sat import (
    CannotMeetTarget,
    Formula,
    SatIndex,
    SatReduction,
    decode_sat,
    encode_sat,
    gen_sat,
)

__all__ = [
    "CannotMeetTarget",
    "Formula",
    "GadgetIndex",
    "GadgetKind",
    "GadgetParams",
    "LemmaReport",
    "MaxCutReduction",
    "SatIndex",
    "SatReduction",
    "decode_maxcut",
    "decode_sat",
    "encode_maxcut",
    "encode_sat",
    "gen_maxcut",
    "gen_sat",
    "lift_unit_processing",
    "verify_gadgets",
]
