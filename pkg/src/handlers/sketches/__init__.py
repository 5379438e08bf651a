"""Compact probabilistic set structures."""

from .bloom import (
    BloomFilter,
    BloomTransfer,
    blind_rsa_bloom_psi,
    bloom_deserialize,
    bloom_fpr_estimate,
    bloom_from_set,
    bloom_insert,
    bloom_optimal_parameters,
    bloom_psi,
    bloom_query,
    bloom_serialize,
    bloom_transfer_bits,
)
from .cuckoo import CuckooTable, InsertOutcome, cuckoo_insert, cuckoo_query, cuckoo_remove
from .count_min import CountMinSketch, cm_cooccurrence_count, cm_query, cm_update

__all__ = [
    "BloomFilter", "BloomTransfer", "blind_rsa_bloom_psi", "bloom_deserialize",
    "bloom_fpr_estimate", "bloom_from_set", "bloom_insert", "bloom_optimal_parameters",
    "bloom_psi", "bloom_query", "bloom_serialize", "bloom_transfer_bits",
    "CuckooTable", "InsertOutcome", "cuckoo_insert", "cuckoo_query", "cuckoo_remove",
    "CountMinSketch", "cm_cooccurrence_count", "cm_query", "cm_update",
]
