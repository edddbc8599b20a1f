import enum
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .constants import PATH_LOSS_EXPONENT
from .exceptions import ParameterDomainError


class NodeId(enum.Enum):
    """The three nodes on the line. A and C are the end nodes, B is the relay between them."""
    A = "A"
    B = "B"
    C = "C"


class Scheme(enum.Enum):
    """Conventional relaying (four slots) or physical-layer network coding (two slots)."""
    CR = "cr"
    PLNC = "plnc"


class SlotRole(enum.Enum):
    """Which of the first two CR slots is active. In the relay-receives slot
    (A->B) nodes A and B reserve; in the end-receives slot (B->C) nodes B and
    C reserve. The last two slots are mirror images of these."""
    RELAY_RECEIVES = "relay-receives"
    END_RECEIVES = "end-receives"


class CountModel(enum.Enum):
    POISSON = "poisson"
    FIXED_EXPECTED = "fixed-expected"


class RateMode(enum.Enum):
    """How Monte Carlo rates are formed: rates from the mean INR, or the mean of per-placement rates."""
    MEAN_INR = "mean-inr"
    PER_REALIZATION = "per-realization"


@dataclass(frozen=True)
class SystemParams:
    """The normalized geometry and interference environment of one evaluation.

    A = (0, 0), B = (r_n, 0) and C = (2 r_n, 0). Interferers live in the disc
    of radius big_r around B, outside the reserved discs of radius r0."""

    """Distance between adjacent nodes. Distance 1 is a 0 dB link."""
    r_n: float

    """Radius of the disc each node reserves with its control frames."""
    r0: float

    """Radius of the network disc holding the interferers."""
    big_r: float

    """Interferers per unit area (lambda)."""
    density: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(value) for value in (self.r_n, self.r0, self.big_r, self.density)):
            raise ParameterDomainError(
                f"r_n, r0, big_r and lambda must be finite, got {self.r_n:g}, {self.r0:g}, "
                f"{self.big_r:g} and {self.density:g}.")
        if not self.r_n > 0:
            raise ParameterDomainError(f"r_n must be positive, got {self.r_n:g}.")
        if not self.r0 > 0:
            raise ParameterDomainError(f"r0 must be positive, got {self.r0:g}.")
        if not self.big_r > self.r0:
            raise ParameterDomainError(f"big_r must exceed r0 = {self.r0:.4g}, got {self.big_r:g}.")
        if not self.density >= 0:
            raise ParameterDomainError(f"lambda must be nonnegative, got {self.density:g}.")

    @classmethod
    def from_snr_db(cls, snr_db: float, r0: float, big_r: float, density: float) -> "SystemParams":
        from .ratemodel import distance_from_snr_db
        return cls(r_n=distance_from_snr_db(snr_db), r0=r0, big_r=big_r, density=density)

    @property
    def link_snr(self) -> float:
        """Linear SNR of the A-B and B-C links."""
        return float(self.r_n ** -PATH_LOSS_EXPONENT)

    def replace(self, **changes: float) -> "SystemParams":
        values = {"r_n": self.r_n, "r0": self.r0, "big_r": self.big_r, "density": self.density}
        values.update(changes)
        return SystemParams(**values)

    def as_dict(self) -> Dict[str, float]:
        return {"r_n": self.r_n, "r0": self.r0, "big_r": self.big_r, "lambda": self.density}


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances handed to the adaptive quadrature. `limit` caps the number
    of subintervals the integrator may create."""
    epsrel: float
    epsabs: float
    limit: int

    def __post_init__(self) -> None:
        if not (self.epsrel > 0 and self.epsabs > 0):
            raise ParameterDomainError("Quadrature tolerances must be positive.")
        if self.limit < 1:
            raise ParameterDomainError("Quadrature subdivision limit must be at least 1.")

    @classmethod
    def default(cls) -> "QuadratureSpec":
        from . import QUAD_EPSREL, QUAD_EPSABS, QUAD_LIMIT
        return cls(epsrel=QUAD_EPSREL, epsabs=QUAD_EPSABS, limit=QUAD_LIMIT)


@dataclass(frozen=True)
class InrBreakdown:
    """Expected INR (linear scale) from every interference region, plus the
    scheme composites built from them."""

    """Toroidal region (annulus around B) seen from B."""
    toro_at_relay: float

    """Toroidal region seen from an end node."""
    toro_at_end: float

    """A-side crescent seen from A."""
    cre_at_end_own: float

    """A-side crescent seen from B."""
    cre_at_relay: float

    """A-side crescent seen from C."""
    cre_at_far_end: float

    cr_at_relay: float
    cr_at_end: float
    plnc_at_relay: float
    plnc_at_end: float

    def composite(self, scheme: Scheme) -> Tuple[float, float]:
        """The (at_relay, at_end) pair for a scheme."""
        if scheme is Scheme.CR:
            return self.cr_at_relay, self.cr_at_end
        return self.plnc_at_relay, self.plnc_at_end

    def as_dict(self) -> Dict[str, float]:
        return dict(self.__dict__)


@dataclass(frozen=True)
class LinkSinrs:
    """Linear SINR of the links A->B, B->A, B->C and C->B."""
    gamma_ab: float
    gamma_ba: float
    gamma_bc: float
    gamma_cb: float


@dataclass(frozen=True)
class RateResult:
    """End-to-end result of one scheme.

    For CR the per-direction rates are min(R_AB, R_BC) and min(R_CB, R_BA).
    For PLNC they are the rates A->C and C->A after AF combining."""
    scheme: Scheme
    per_direction_rates: Tuple[float, float]
    reserved_area: float
    rate_per_area: float
    inr_used: Tuple[float, float]

    def as_row(self) -> Dict[str, Any]:
        return {
            "scheme": self.scheme.value,
            "rate_ab_or_ac": self.per_direction_rates[0],
            "rate_cb_or_ca": self.per_direction_rates[1],
            "rate_per_area": self.rate_per_area,
            "inr_relay": self.inr_used[0],
            "inr_end": self.inr_used[1],
            "area": self.reserved_area,
        }


@dataclass(frozen=True)
class McConfig:
    trials: int
    seed: int
    count_model: CountModel = CountModel.POISSON
    threads: int = 1

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ParameterDomainError(f"trials must be at least 1, got {self.trials}.")
        if self.threads < 1:
            raise ParameterDomainError(f"threads must be at least 1, got {self.threads}.")
        if not 0 <= self.seed < 2 ** 64:
            raise ParameterDomainError("seed must be a 64-bit unsigned integer.")


@dataclass(frozen=True)
class McEstimate:
    """Sample mean and its standard error over `trials` independent placements."""
    mean: float
    std_error: float
    trials: int
    seed: int


@dataclass(frozen=True)
class McRateEstimate:
    """A Monte Carlo rate result. `rate` is built by the same algebra as the
    analytic path; in per-realization mode its rates are placement averages
    and `rate_per_area` carries their standard error."""
    rate: RateResult
    mode: RateMode
    inr_at_relay: McEstimate
    inr_at_end: McEstimate
    rate_per_area: McEstimate


@dataclass(frozen=True)
class ComparisonRow:
    params: SystemParams
    quantity: str
    analytic: float
    mc_mean: float
    mc_std_error: float
    z: float
    passed: bool

    def as_row(self) -> Dict[str, Any]:
        row: Dict[str, Any] = self.params.as_dict()
        row.update({
            "quantity": self.quantity,
            "analytic": self.analytic,
            "mc_mean": self.mc_mean,
            "mc_stderr": self.mc_std_error,
            "z": self.z,
            "pass": self.passed,
        })
        return row


@dataclass(frozen=True)
class SweepGrid:
    """An inclusive grid start, start + step, ..., stop. The stop point is
    included when it lies within half a step of a grid value."""
    start: float
    stop: float
    step: float

    def __post_init__(self) -> None:
        if not self.step > 0:
            raise ParameterDomainError(f"Grid step must be positive, got {self.step:g}.")
        if not self.stop >= self.start:
            raise ParameterDomainError(f"Grid stop {self.stop:g} is below its start {self.start:g}.")

    @property
    def count(self) -> int:
        return int(math.floor((self.stop - self.start) / self.step + 0.5)) + 1

    def values(self) -> List[float]:
        return [round(self.start + i * self.step, 12) for i in range(self.count)]


@dataclass(frozen=True)
class SweepRecord:
    """One row of a sweep: a grid value `x` (r0 or lambda) and one scheme's result there."""
    x: float
    scheme: Scheme
    rate_per_area: float
    inr_at_relay: float
    inr_at_end: float
    reserved_area: float
    best_r0: Optional[float] = None

    @classmethod
    def from_rate(cls, x: float, rate: RateResult, best_r0: Optional[float] = None) -> "SweepRecord":
        return cls(x=x, scheme=rate.scheme, rate_per_area=rate.rate_per_area,
                   inr_at_relay=rate.inr_used[0], inr_at_end=rate.inr_used[1],
                   reserved_area=rate.reserved_area, best_r0=best_r0)


@dataclass(frozen=True)
class RadiusRecord:
    big_r: float
    inr_finite: float
    inr_unbounded: float

    @property
    def relative_gap(self) -> float:
        if self.inr_unbounded == 0:
            return 0.0
        return (self.inr_unbounded - self.inr_finite) / self.inr_unbounded


@dataclass(frozen=True)
class CrossoverResult:
    """Where optimized PLNC and CR rates per area meet along lambda.

    lambda_star is None when the sign of the difference does not change in
    the searched range; `dominant` is then the scheme that wins throughout."""
    lambda_star: Optional[float]
    dominant: Optional[Scheme]
    lambda_range: Tuple[float, float] = field(default=(0.0, 0.0))


class InterferenceRegion(enum.Enum):
    """Where interferers may be placed. TOROIDAL and CRESCENT are the
    building blocks of the analytic INR; the others are the regions left
    free by each scheme's reservation."""
    TOROIDAL = "toroidal"
    CRESCENT = "crescent"
    CR_RELAY_RECEIVES = "cr-relay-receives"
    CR_END_RECEIVES = "cr-end-receives"
    PLNC = "plnc"
