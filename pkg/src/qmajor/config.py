"""Numerical tolerances and limits shared by every module."""
from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Config:
    """Tolerances, dimension cap and randomized-suite settings.

    Every tolerance is an absolute bound on a max-abs residual.
    """

    tol_herm: float = 1e-9
    tol_psd: float = 1e-9
    tol_trace: float = 1e-9
    tol_povm: float = 1e-9
    tol_prob: float = 1e-12
    tol_major: float = 1e-9
    tol_ds: float = 1e-9
    tol_recon: float = 1e-8
    dim_cap: int = 256
    seed: int = 0
    trials: int = 1000

    def __post_init__(self):
        for f in fields(self):
            if f.name.startswith("tol_") and not getattr(self, f.name) > 0:
                raise ValueError(f"{f.name} must be positive")
        if self.dim_cap < 2:
            raise ValueError("dim_cap must be at least 2")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")

    def with_(self, **changes):
        return replace(self, **changes)


DEFAULT = Config()


def resolve(cfg):
    return DEFAULT if cfg is None else cfg
