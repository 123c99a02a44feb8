"""Geometric phases and global entanglement in Heisenberg spin rings."""
from .dynamics import (CyclicOptions, CyclicTime, EvolutionContext, evolve_at,
                       find_common_cyclic_time, find_cyclic_time, prepare_evolution)
from .entanglement import (average_global_entanglement, global_entanglement,
                           qmed_from_beta_i)
from .errors import (ConfigError, IncommensurateSpectrum, NoReturnFound,
                     OrthogonalOverlap, WindingError)
from .hilbert import (ProductStateSpec, StateVector, build_product_state,
                      inner_product, reduce_to_site)
from .model import ChainConfig, build_heisenberg, enumerate_sectors, spectral_decompose
from .phases import (PhaseReport, aa_phase, dynamic_phase, free_spin_ms_phase,
                     interaction_aa_phase, interaction_ms_phase, ms_phase, total_phase)

__version__ = "0.1.0"
