"""Exception hierarchy shared by all modules."""

#: Reason codes attached to unavailable screen constructions.
REASON_CODES = (
    "totally_geodesic",
    "K_is_eigenvalue",
    "non_transversal",
    "equal_eigenvalues",
    "K_proportional_to_eigenvalues",
)


class LightlikeError(Exception):
    """Base class for every error raised by the package."""


class DomainError(LightlikeError):
    """A point (or a stencil point around it) lies outside the chart."""


class DegenerateMetricError(LightlikeError):
    """The metric matrix is numerically singular."""


class SignatureError(LightlikeError):
    """The metric does not have Lorentzian signature at a point."""


class ImmersionError(LightlikeError):
    """The patch Jacobian does not have full rank."""


class NotLightlikeError(LightlikeError):
    """The tangent plane is not tangent to the isotropic cone."""


class DegenerateInputError(LightlikeError):
    """The induced metric has a radical of dimension two or more."""


class InvalidGaugeError(LightlikeError):
    """Gauge parameters do not define an admissible frame change."""


class StencilError(LightlikeError):
    """A finite-difference stencil point could not be evaluated."""


class NormalizationUnavailable(LightlikeError):
    """A relative invariant is too small to normalize the isotropic vector."""


class DenominatorVanishes(LightlikeError):
    """The denominator of an absolute invariant vanishes."""


class ScreenUnavailable(LightlikeError):
    """An invariant screen construction is not applicable at a point.

    ``reason`` is one of :data:`REASON_CODES`.
    """

    def __init__(self, reason, detail=""):
        if reason not in REASON_CODES:
            raise ValueError(f"unknown reason code {reason!r}")
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}: {detail}" if detail else reason)


class InconsistentScreenError(LightlikeError):
    """The measured connection form is not a combination of the coframe."""


class ConfigError(LightlikeError):
    """Invalid analysis configuration; ``path`` names the offending field."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class NotUmbilicalError(LightlikeError):
    """The hypersurface is not totally umbilical (or its umbilic value is zero)."""
