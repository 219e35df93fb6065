"""Exception hierarchy shared across the package."""


class SnapshelfError(Exception):
    """Base class for all snapshelf errors."""


class InvalidInputError(SnapshelfError):
    """Caller supplied arguments that violate an operation's contract."""


class InvalidEditError(SnapshelfError):
    """An edit references unknown resources or breaks record invariants."""


class InvalidRegionError(SnapshelfError):
    """Capture region is degenerate after clipping to the screen."""


class InvalidImageError(SnapshelfError):
    """Image bytes are not a decodable PNG."""


class NotFoundError(SnapshelfError):
    """No record or draft with the given id."""


class StorageError(SnapshelfError):
    """The persistence layer failed or refused an operation."""


class ScenarioError(SnapshelfError):
    """Scenario file failed to parse or violates scenario invariants."""


class RegistryError(SnapshelfError):
    """Script registry file is malformed."""


class ProviderError(SnapshelfError):
    """The desktop provider is unavailable or failed."""
