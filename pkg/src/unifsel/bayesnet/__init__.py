"""Bayesian networks: simulation, d-separation, ground truth, exact oracles."""
from .exact import (CapExceeded, JointDistribution, brute_force_best_subset, brute_force_relevance,
                    exact_bayes_error, exact_cond_entropy, exact_entropy, exact_joint, exact_mi,
                    exact_set_mi, faithfulness_screen)
from .generate import largest_blanket_node, random_network, screened_networks
from .graph import Blanket, d_separated, true_mb, true_pc
from .network import (BayesianNetwork, NetworkError, load_network, network_from_dict, save_network,
                      validate)
from .sampling import forward_sample, make_rng, sample_codes

__all__ = [
    "BayesianNetwork", "Blanket", "CapExceeded", "JointDistribution", "NetworkError",
    "brute_force_best_subset", "brute_force_relevance", "d_separated", "exact_bayes_error",
    "exact_cond_entropy", "exact_entropy", "exact_joint", "exact_mi", "exact_set_mi",
    "faithfulness_screen", "forward_sample", "largest_blanket_node", "load_network", "make_rng",
    "network_from_dict", "random_network", "sample_codes", "save_network", "screened_networks",
    "true_mb", "true_pc", "validate",
]
