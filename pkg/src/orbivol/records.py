"""Serialisable result records shared by the CLI and the table harness."""
import json
import math
from dataclasses import asdict, dataclass, fields

CSV_FIELDS = ("two_n", "two_m", "r", "lambda_re", "lambda_im", "w_re", "w_im",
              "volume", "cs_rep", "modulus")


@dataclass(frozen=True)
class ResultRecord:
    knot: str
    two_n: int
    two_m: int
    r: int  # None for the complete structure
    lambda_re: float
    lambda_im: float
    w_re: float
    w_im: float
    volume: float
    cs_rep: float
    modulus: float
    residual: float
    pipeline: str  # "closed-form" or "solver"
    cs_normalized: float = None

    @classmethod
    def from_invariants(cls, inv, knot, pipeline, two_n=None, two_m=None, normalize=False):
        lam = inv.lam
        return cls(knot, two_n, two_m, inv.r,
                   None if lam is None else lam.real, None if lam is None else lam.imag,
                   inv.w_raw.real, inv.w_raw.imag, inv.volume, inv.cs_rep, inv.modulus,
                   inv.residual, pipeline, inv.cs_normalized if normalize else None)

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        d = json.loads(text) if isinstance(text, str) else dict(text)
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})

    def csv_row(self):
        return [_fmt(getattr(self, k)) for k in CSV_FIELDS]

    def text(self):
        lines = []
        for k, v in self.to_dict().items():
            if v is not None:
                lines.append(f"{k}: {_fmt(v)}")
        return "\n".join(lines)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return "inf" if math.isinf(v) else repr(v)
    return str(v)
