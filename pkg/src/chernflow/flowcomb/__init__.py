"""Flow-simplex combinatorics and Koszul sign calculus."""
from .oracle import oracle_face, oracle_product, permutation_sign
from .posets import (FlowTree, ObjectTuple, TreePoset, all_posets, check_codim_monotone,
                     check_face_identity, check_model, codim, concatenate, enumerate_poset,
                     enumerate_trees, face, face_inclusion, is_morphism)
from .signs import SignContext, koszul_sign_face, koszul_sign_product

__all__ = ["FlowTree", "ObjectTuple", "SignContext", "TreePoset", "all_posets",
           "check_codim_monotone", "check_face_identity", "check_model", "codim", "concatenate",
           "enumerate_poset", "enumerate_trees", "face", "face_inclusion", "is_morphism",
           "koszul_sign_face", "koszul_sign_product", "oracle_face", "oracle_product",
           "permutation_sign"]
