"""Multiple testing procedures module"""
from .classical import bh, bh_count, bonferroni, by, ebh_comparator, harmonic_number, mask, step_down_bh
from .graph_adapted import indbh_k_reference, indbh_reference, naive_adjusted_bh, su_fixed_point
from .spec import ProcedureKind, ProcedureSpec
