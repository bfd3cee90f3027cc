"""Exception types shared across the package."""


class DataError(Exception):
    """Problem with input data (images, manifests, stores, corpora)."""


class InvalidInputError(DataError, ValueError):
    """An operation received arguments that violate its contract."""


class DecodeError(DataError):
    """An image file exists but cannot be decoded."""


class ManifestError(DataError):
    """A manifest file is malformed or inconsistent."""


class StoreError(DataError):
    """A descriptor or model store file is malformed."""


class UsageError(Exception):
    """The command line was invoked incorrectly."""
