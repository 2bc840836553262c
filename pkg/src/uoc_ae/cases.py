"""The six benchmark configurations (SABR-type, λ = 0)."""

from __future__ import annotations

from dataclasses import dataclass

from .params import BarrierOption, ModelParams

STRIKES = (100.0, 102.0, 105.0)


@dataclass(frozen=True)
class CaseDefinition:
    case_id: int
    eps_nu: float
    H: float
    S: float = 100.0
    sigma: float = 0.2
    c: float = 0.0
    q: float = 0.0
    rho: float = -0.5
    eps_lam: float = 0.0
    theta: float = 0.0
    T: float = 1.0
    strikes: tuple = STRIKES

    def model(self, eps: float = 0.1) -> ModelParams:
        return ModelParams.from_products(self.S, self.sigma, self.c, self.q, self.eps_nu,
                                         self.eps_lam, self.theta, self.rho, eps=eps)

    def option(self, K: float) -> BarrierOption:
        return BarrierOption(K, self.H, self.T)


CASES = {
    1: CaseDefinition(1, 0.1, 120.0),
    2: CaseDefinition(2, 0.1, 130.0),
    3: CaseDefinition(3, 0.1, 140.0),
    4: CaseDefinition(4, 0.2, 120.0),
    5: CaseDefinition(5, 0.2, 130.0),
    6: CaseDefinition(6, 0.2, 140.0),
}
