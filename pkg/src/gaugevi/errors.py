"""Exception types shared across the package."""


class GaugeVIError(Exception):
    """Base class for all library errors."""


class TooManyFreeEdges(GaugeVIError):
    """Enumeration requested over more free edges than the configured cap."""


class NegativeMass(GaugeVIError):
    """A configuration of a supposedly non-negative model has negative mass."""


class MissingGauge(GaugeVIError):
    """A GaugeSet does not cover every edge of the model."""


class NonPositiveFactorAtWeightedEntry(GaugeVIError):
    """A gauge objective was evaluated where a positively-weighted factor
    entry is <= 0 (barrier violation; the caller must shrink its step)."""


class Decomposable(GaugeVIError):
    """A line model has two or more non-invertible interior factors and
    must be split before joining into a cycle."""


class NotAlternating(GaugeVIError):
    """Cycle factor determinants multiply to a non-negative number."""


class DegenerateEigenpair(GaugeVIError):
    """The cycle product matrix has (nearly) coincident eigenvalues."""


class PositiveWeightOnZeroFactor(GaugeVIError):
    """A product distribution assigns positive weight to a zero factor entry."""


class InconsistentBeliefs(GaugeVIError):
    """Beliefs violate normalization or marginal-consistency constraints."""


class InfeasibleStart(GaugeVIError):
    """No feasible gauge initialization was found."""


class InvalidRecipe(GaugeVIError):
    """A model recipe is structurally impossible."""


class ExactNearZero(GaugeVIError):
    """The exact log partition value is too close to zero for a relative
    error metric."""


class NegativeEntry(GaugeVIError):
    """A transformed model expected to be non-negative has a negative entry."""
