"""Inference of sunlet phylogenetic networks from determinantal invariants."""

from .alignment import Alignment, project_to_binary, read_fasta, write_fasta
from .infer import canonicalize, enumerate_labelings, infer_alignment, rank_networks, true_rank
from .invariants import SunletLabeling, Three, Two, evaluate_minor, generate_minors, score_labeling
from .model import AffineParams, beta_point, hadamard_transform, omega_from_params, omega_from_q, phi, psi
from .seqsim import NetworkParams, SunletTopology, expected_moments, pairwise_moments, simulate_alignment
from .skewpfaff import SkewMatrix, determinant, pfaffian, signed_minor, sub_pfaffian

__version__ = "0.1.0"
