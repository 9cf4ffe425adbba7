"""Randomness extraction with universal hashing, end to end.

The package covers one pipeline in five layers:

- `bits` / `ledger`: bit strings, entropy descriptors, and the epsilon
  arithmetic that tracks how close every derived value is to uniform;
- `toeplitz` / `_kernels` / `oracles`: the seeded hash families, their
  fast word-packed kernels, and exhaustive small-size ground truth;
- `bounds`: every admissible-output-length formula, with term-labeled
  reports;
- `bootstrap` / `combiner`: seeding extraction from two raw entropy
  sources, and mixing two secret keys under explicit threat cases;
- `handshake`: a deterministic two-party authenticated key-agreement
  simulator driving the schedule, MACs, and budget accounting.

`cli.main` exposes all of it as one command-line tool.
"""

from .bits import (BitString, concat, concat_all, dump_qbits, load_qbits,
                   read_qbits, split, truncate, write_qbits, xor)
from .bootstrap import (BootstrapPlan, Infeasible, InsufficientSeedMaterial,
                        SourceModel, WeakSourceSim, plan_bootstrap,
                        run_bootstrap, sample_weak_source)
from .bounds import (AlphaPartition, BoundReport, ThreatCase,
                     alpha_partition, combine_case_bound, public_seed_bound,
                     public_seed_bound_many, qlhl_basic, qlhl_general,
                     qlhl_weak_seed_penalized, report_to_kv_dict,
                     required_hmin)
from .combiner import (CombineMode, CombineRequest, CombineResult,
                       OrderingViolation, combine_private, combine_public,
                       combine_public_many, model_pqc_key,
                       residual_after_reveal, xor_combine_baseline,
                       xor_vs_extractor_report)
from .ledger import (EntropyKind, IndependenceError, SecurityLevel,
                     SourceSpec, concat_sources, eps_add, eps_sum,
                     kv_format, kv_parse, leak, source_from_kv,
                     source_to_kv, split_secure, truncate_source)
from .oracles import (collision_probability, exact_extraction_distance,
                      exact_output_distance, matrix_rank_gf2,
                      zero_hash_probability)
from .toeplitz import (ExtractorParams, Family, SeededHash, extract,
                       extract_fast, hash_matrix)
from . import handshake

__version__ = "0.1.0"

__all__ = [
    "AlphaPartition", "BitString", "BootstrapPlan", "BoundReport",
    "CombineMode", "CombineRequest", "CombineResult", "EntropyKind",
    "ExtractorParams", "Family", "IndependenceError", "Infeasible",
    "InsufficientSeedMaterial", "OrderingViolation", "SecurityLevel",
    "SeededHash", "SourceModel", "SourceSpec", "ThreatCase",
    "WeakSourceSim", "alpha_partition", "collision_probability",
    "combine_case_bound", "combine_private", "combine_public",
    "combine_public_many", "concat", "concat_all", "concat_sources",
    "dump_qbits", "eps_add", "eps_sum", "exact_extraction_distance",
    "exact_output_distance", "extract", "extract_fast", "handshake",
    "hash_matrix", "kv_format", "kv_parse", "leak", "load_qbits",
    "matrix_rank_gf2", "model_pqc_key", "plan_bootstrap",
    "public_seed_bound", "public_seed_bound_many", "qlhl_basic",
    "qlhl_general", "qlhl_weak_seed_penalized", "read_qbits",
    "report_to_kv_dict", "required_hmin", "residual_after_reveal",
    "run_bootstrap", "sample_weak_source", "source_from_kv", "source_to_kv",
    "split", "split_secure", "truncate", "truncate_source", "write_qbits",
    "xor", "xor_combine_baseline", "xor_vs_extractor_report",
    "zero_hash_probability",
]
