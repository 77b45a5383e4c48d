"""Exception hierarchy shared by all hybridsd modules.

Three branches matter to callers: input problems (bad files, bad records,
unscorable pairs), provider problems (embedding backends), and undefined
metric values. The CLI maps each branch to its own exit code.
"""

from __future__ import annotations


class HybridSdError(Exception):
    """Base class for all errors raised by this package."""


class InputError(HybridSdError):
    """Malformed or unusable caller input (files, records, sentences)."""


class ParseError(InputError):
    """A corpus or store file failed to parse.

    Carries the offending line number when one is known.
    """

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix += str(path)
        if line is not None:
            prefix += f":{line}"
        super().__init__(f"{prefix}: {message}" if prefix else message)


class DuplicateIdError(InputError):
    """Two corpus records share an id."""

    def __init__(self, pair_id: str, line: int | None = None):
        self.pair_id = pair_id
        at = f" (line {line})" if line is not None else ""
        super().__init__(f"duplicate pair id {pair_id!r}{at}")


class EmptyReferenceError(InputError):
    """Reference normalized to zero words; WER and NKER are undefined."""


class ProviderError(HybridSdError):
    """An embedding provider could not produce a vector."""


class DimensionMismatchError(ProviderError):
    """Two vectors (or a vector and its provider) disagree on dimension."""


class ZeroVectorError(ProviderError):
    """Cosine similarity requested against an all-zero vector."""


class StoreMissError(ProviderError):
    """Exact-match lookup failed in an embedding store."""

    def __init__(self, text: str):
        self.text = text
        super().__init__(f"no stored embedding for sentence {text!r}")


class RemoteError(ProviderError):
    """Base for remote embedding service failures."""


class RemoteTransportError(RemoteError):
    """Could not reach the remote embedding endpoint."""


class RemoteStatusError(RemoteError):
    """Remote endpoint answered with a non-success HTTP status."""

    def __init__(self, status: int, detail: str = ""):
        self.status = status
        suffix = f": {detail}" if detail else ""
        super().__init__(f"remote embedding service returned HTTP {status}{suffix}")


class RemoteShapeError(RemoteError):
    """Remote endpoint returned the wrong number or shape of vectors."""


class UndefinedMetricError(HybridSdError):
    """A metric has no defined value for the given inputs."""


class UndefinedWerError(UndefinedMetricError):
    """WER is undefined because the reference has zero words."""


class UndefinedNkerError(UndefinedMetricError):
    """NKER is undefined: non-keyword errors with zero reference non-keywords."""


class UndefinedCorrelationError(UndefinedMetricError):
    """Correlation is undefined (too few points or zero variance)."""
