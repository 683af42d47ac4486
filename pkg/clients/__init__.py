"""Client modules for the file-system boundary: masks, manifests and artifacts."""

from .artifact_store import ArtifactStore, dumps_json
from .mask_store import MaskStore, decode_pgm, encode_pgm, load_mask

__all__ = [
    "ArtifactStore",
    "MaskStore",
    "decode_pgm",
    "encode_pgm",
    "dumps_json",
    "load_mask",
]
