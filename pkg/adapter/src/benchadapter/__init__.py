"""Reference detector adapter for the bench batch scoring protocol.

Wraps any Python-loadable model behind the harness's JSONL contract:
read ``{"frame_id", "path"}`` lines from a batch file, score every
frame, print ``{"frame_id", "score"}`` lines, exit 0. The model loads
once per invocation, so batch size amortizes slow neural-net startup.
"""

__version__ = "0.1.0"

from .adapter import AdapterConfig, AdapterError, resolve_loader, serve_batch

__all__ = ["AdapterConfig", "AdapterError", "resolve_loader", "serve_batch", "__version__"]
