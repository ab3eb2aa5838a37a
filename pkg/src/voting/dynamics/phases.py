"""Phase labels of a trajectory point.

General model (quasi-majority f, constants from its UpdatingProfile):

    I    |delta| <= c1 log n / sqrt(n)
    II   2 max(K, 8) / eps_h * max(lambda^2, ||pi||_2 sqrt(log n)) <= |delta| <= eps_h / K
    III  c2 <= min(pi(A), pi(B)) <= c3
    IV   min(pi(A), pi(B)) <= eps_c / (8K)
    V    H'(0) = 0 and min(pi(A), pi(B)) <= 1 / (7K)

The ranges overlap; the smaller-minority phase wins (IV > V > III > II > I).
Points in none of the ranges are labelled "other".

Growing-k model (best-of-(2k+1)):

    I    |delta| <= 300 C log n / sqrt(n)
    II   |delta| <= 1.25 / sqrt(k)
    III  |delta| <= 0.9
    IV   otherwise, short of consensus
"""

import math
from dataclasses import dataclass
from typing import Optional, Protocol

from config.settings import settings
from src.voting.errors import InvalidParam, Unclassifiable
from src.voting.state.schemas import Phase, SpectralSummary, UpdatingProfile

_CONSENSUS_SLACK = 1e-12


class PhaseModel(Protocol):
    def classify(self, delta: float, consensus: Optional[bool] = None) -> Phase: ...


def _is_consensus(delta: float, consensus: Optional[bool]) -> bool:
    if consensus is not None:
        return consensus
    return abs(delta) >= 1.0 - _CONSENSUS_SLACK


@dataclass(frozen=True)
class PhaseClassifier:
    phase1_max: float
    phase2_min: float
    phase2_max: float
    phase3_min: float
    phase3_max: float
    phase4_max: float
    phase5_max: Optional[float]

    @classmethod
    def from_profile(
        cls,
        profile: UpdatingProfile,
        summary: SpectralSummary,
        pi_norm2: float,
        n: int,
        c1: Optional[float] = None,
        c2: Optional[float] = None,
        c3: Optional[float] = None,
    ) -> "PhaseClassifier":
        if not profile.available:
            raise Unclassifiable("phase thresholds need a C^2 betrayal function",
                                 spec=profile.spec_label)
        assert profile.eps_h is not None and profile.eps_c is not None
        assert profile.Kf is not None and profile.h1_zero is not None
        eps_h, eps_c, K = profile.eps_h, profile.eps_c, profile.Kf
        if eps_h <= 0.0 or K <= 0.0:
            raise Unclassifiable("phase thresholds need eps_h > 0 and K > 0",
                                 spec=profile.spec_label, eps_h=eps_h, K=K)
        c1 = settings.phase_c1 if c1 is None else c1
        c3 = settings.phase_c3 if c3 is None else c3
        c2 = min(eps_h / K, c3 / 2) if c2 is None else c2
        if not 0.0 < c2 < c3 < 0.5:
            raise Unclassifiable("phase constants need 0 < c2 < c3 < 1/2", c2=c2, c3=c3)

        log_n = math.log(max(n, 2))
        lam = summary.lam
        return cls(
            phase1_max=c1 * log_n / math.sqrt(n),
            phase2_min=2.0 * max(K, 8.0) / eps_h * max(lam**2, pi_norm2 * math.sqrt(log_n)),
            phase2_max=eps_h / K,
            phase3_min=c2,
            phase3_max=c3,
            phase4_max=max(eps_c, 0.0) / (8.0 * K),
            phase5_max=1.0 / (7.0 * K) if abs(profile.h1_zero) <= 1e-12 else None,
        )

    @classmethod
    def growth_band(cls, lo: float, hi: float) -> "PhaseClassifier":
        """Calibrated bands: II is lo <= |delta| <= hi, I below it, "other" above.

        For desk-scale graphs, where the analytical growth band is empty.
        """
        if not 0.0 <= lo < hi <= 1.0:
            raise InvalidParam("growth band needs 0 <= lo < hi <= 1", lo=lo, hi=hi)
        return cls(
            phase1_max=lo,
            phase2_min=lo,
            phase2_max=hi,
            phase3_min=1.0,
            phase3_max=0.0,
            phase4_max=0.0,
            phase5_max=None,
        )

    def classify(self, delta: float, consensus: Optional[bool] = None) -> Phase:
        if _is_consensus(delta, consensus):
            return "consensus"
        bias = abs(delta)
        minority = (1.0 - bias) / 2.0
        if minority <= self.phase4_max:
            return "IV"
        if self.phase5_max is not None and minority <= self.phase5_max:
            return "V"
        if self.phase3_min <= minority <= self.phase3_max:
            return "III"
        if self.phase2_min <= bias <= self.phase2_max:
            return "II"
        if bias <= self.phase1_max:
            return "I"
        return "other"


@dataclass(frozen=True)
class GrowingKClassifier:
    phase1_max: float
    phase2_max: float
    phase3_max: float = 0.9

    @classmethod
    def for_order(cls, half_k: int, n: int, C: Optional[float] = None) -> "GrowingKClassifier":
        C = settings.bok_phase_c if C is None else C
        return cls(
            phase1_max=300.0 * C * math.log(max(n, 2)) / math.sqrt(n),
            phase2_max=1.25 / math.sqrt(half_k),
        )

    def classify(self, delta: float, consensus: Optional[bool] = None) -> Phase:
        if _is_consensus(delta, consensus):
            return "consensus"
        bias = abs(delta)
        if bias <= self.phase1_max:
            return "I"
        if bias <= self.phase2_max:
            return "II"
        if bias <= self.phase3_max:
            return "III"
        return "IV"


def classify_phase(
    delta: float,
    profile: UpdatingProfile,
    summary: SpectralSummary,
    pi_norm2: float,
    n: int,
) -> Phase:
    """One-off label; build a PhaseClassifier once when labelling many points."""
    return PhaseClassifier.from_profile(profile, summary, pi_norm2, n).classify(delta)
