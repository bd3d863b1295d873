"""Exception types shared across the package."""


class DataError(ValueError):
    """Input data is malformed or unusable (bad file contents, empty corpora)."""


class IngestError(DataError):
    pass


class FormatError(DataError):
    pass


class FitError(DataError):
    pass
