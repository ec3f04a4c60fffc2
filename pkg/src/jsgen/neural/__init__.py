"""Neural generator: model, training, decoding, checkpoints."""
from .checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from .data import Instance, collate, example_actions, make_instance, make_instances
from .decode import Candidate, action_distribution, beam_decode, greedy_decode, score_actions
from .gradcheck import finite_difference_check
from .model import ModelConfig, Seq2Tree
from .train import TrainConfig, TrainingDiverged, mean_nll, step_log_probs, train

__all__ = [
    "Candidate", "CheckpointError", "Instance", "ModelConfig", "Seq2Tree", "TrainConfig", "TrainingDiverged",
    "action_distribution", "beam_decode", "collate", "example_actions", "finite_difference_check",
    "greedy_decode", "load_checkpoint", "make_instance", "make_instances", "mean_nll", "save_checkpoint",
    "score_actions", "step_log_probs", "train",
]
