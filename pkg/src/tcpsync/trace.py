"""Uniformly sampled time-series container with CSV/JSON serialisation.

A Trace holds one or more equally long sample arrays on the grid
t0 + k*dt plus free-form metadata (model id, parameters, seed).  Writing is
bit-reproducible: floats are serialised with shortest round-trip repr and
JSON keys are sorted.
"""

import json
from dataclasses import dataclass, field

import numpy as np


@dataclass
class Trace:
    t0: float
    dt: float
    data: dict
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("sample spacing must be positive")
        if not self.data:
            raise ValueError("trace needs at least one channel")
        lengths = {name: len(arr) for name, arr in self.data.items()}
        if len(set(lengths.values())) != 1:
            raise ValueError(f"channel lengths differ: {lengths}")
        self.data = {name: np.asarray(arr, dtype=float) for name, arr in self.data.items()}

    def __len__(self):
        return len(next(iter(self.data.values())))

    @property
    def t(self):
        return self.t0 + self.dt * np.arange(len(self))

    @property
    def duration(self):
        return self.dt * (len(self) - 1)

    def channel(self, name):
        return self.data[name]

    def tail(self, fraction):
        """Samples after discarding the leading ``fraction`` as transient."""
        k0 = int(len(self) * fraction)
        return {name: arr[k0:] for name, arr in self.data.items()}

    def write_csv(self, path):
        names = sorted(self.data)
        cols = [self.data[n] for n in names]
        tvals = self.t
        with open(path, "w", newline="") as fh:
            fh.write(",".join(["t"] + names) + "\n")
            for k in range(len(self)):
                row = [repr(float(tvals[k]))] + [repr(float(c[k])) for c in cols]
                fh.write(",".join(row) + "\n")

    def to_dict(self):
        return {
            "t0": self.t0,
            "dt": self.dt,
            "meta": self.meta,
            "data": {name: [float(v) for v in arr] for name, arr in self.data.items()},
        }

    def write_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True, indent=1)
            fh.write("\n")

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            obj = json.load(fh)
        return cls(t0=obj["t0"], dt=obj["dt"], data=obj["data"], meta=obj.get("meta", {}))
