"""Heralded-biphoton and quantum-inspired classical probe spectroscopy."""

__version__ = "0.1.0"

from .correlators import (CorrelatorKind, anomalous_two_point, heralded_four_point,
                          normal_two_point, one_point)
from .errors import (CombinatorialLimitExceeded, GridTooNarrow, IndexOutOfRange, ParseError,
                     QLSError, QuadratureUnderResolved, UnsupportedState, ValidationError)
from .matter_response import MatterParams, f_tilde, peak_frequencies
from .phase_matching import (BeamGeometry, WaveVector, is_geometry_valid, signal_wavevector,
                             survives_in_probe_direction)
from .pulses import (BiphotonGaussianParams, FrequencyGrid, GaussianProfile, ProbeKind, ProbeState,
                     SpectralProfile, biphoton_amplitude, condition_on_reference,
                     conventional_probe, gaussian_reduction)
from .signal_engine import (EquivalenceReport, QuadratureSpec, Spectrum2D, equivalence_report,
                            heralded_signal, pump_probe_signal, spectrum)
from .term_expansion import (Interaction, TermClass, TermDescriptor, classify, enumerate_terms,
                             field_signature, interaction_scale, surviving_terms)
