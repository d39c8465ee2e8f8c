"""Cyclic wavelet fusion for tactile image sequences from curved-elastomer sensors."""
from cyclefuse._backend import NAME as BACKEND
from cyclefuse.alignment import Shift, apply_shift, estimate_shift
from cyclefuse.fusion import AblationMode, FusionConfig, ablate, fuse_pair, fuse_sequence
from cyclefuse.image import GrayImage, SequenceManifest, read_pgm, remap_to_gray, write_pgm
from cyclefuse.metrics import compare_methods, information_entropy, ms_ssim
from cyclefuse.saliency import SaliencyWeights, adjust_saliency, fusion_weights, saliency_map
from cyclefuse.simulator import SceneSpec, contact_profile, generate_sequence, render_pattern_mask
from cyclefuse.wavelet import Family, SubbandSet, WaveletSpec, dwt2, idwt2, pad_even

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AblationMode",
    "Family",
    "FusionConfig",
    "GrayImage",
    "SaliencyWeights",
    "SceneSpec",
    "SequenceManifest",
    "Shift",
    "SubbandSet",
    "WaveletSpec",
    "ablate",
    "adjust_saliency",
    "apply_shift",
    "compare_methods",
    "contact_profile",
    "dwt2",
    "estimate_shift",
    "fuse_pair",
    "fuse_sequence",
    "fusion_weights",
    "generate_sequence",
    "idwt2",
    "information_entropy",
    "ms_ssim",
    "pad_even",
    "read_pgm",
    "remap_to_gray",
    "render_pattern_mask",
    "saliency_map",
    "write_pgm",
]
