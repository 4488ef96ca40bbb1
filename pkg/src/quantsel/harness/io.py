"""Instance and certificate files: JSON with rationals written as "p/q" strings."""
import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction

from .. import _rational as R
from ..ellipsoid import Ellipsoid
from ..errors import InvalidInput
from ..geometry import ConvexBody
from ..tverberg import Segment

KINDS = ("bodies", "segments", "colorFamilies")
CERT_KINDS = ("john", "tverberg", "colorfulTverberg", "diameterTverberg", "selection", "epsnet",
              "sametype", "homogeneous")


def rat(s):
    """Parse a rational string (or int); reject floats so files stay exact."""
    if isinstance(s, bool) or isinstance(s, float):
        raise InvalidInput(f"expected a rational string, got {s!r}")
    try:
        return Fraction(s)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"bad rational {s!r}") from exc


def rats(v):
    return tuple(rat(x) for x in v)


def qs(x):
    return R.qstr(R.q(x))


def point_json(p):
    return [qs(x) for x in p]


def ellipsoid_json(e):
    return {"shape": [point_json(row) for row in e.shape], "center": point_json(e.center)}


def ellipsoid_from(obj):
    try:
        return Ellipsoid(tuple(rats(row) for row in obj["shape"]), rats(obj["center"]))
    except (KeyError, TypeError) as exc:
        raise InvalidInput("malformed ellipsoid") from exc


def segment_json(s):
    return {"a": point_json(s.a), "b": point_json(s.b)}


def segment_from(obj):
    try:
        return Segment(rats(obj["a"]), rats(obj["b"]))
    except (KeyError, TypeError) as exc:
        raise InvalidInput("malformed segment") from exc


def witness_json(w):
    return {"ellipsoid": ellipsoid_json(w)} if isinstance(w, Ellipsoid) else {"segment": segment_json(w)}


def witness_from(obj):
    if not isinstance(obj, dict):
        raise InvalidInput("malformed witness")
    if "ellipsoid" in obj:
        return ellipsoid_from(obj["ellipsoid"])
    if "segment" in obj:
        return segment_from(obj["segment"])
    raise InvalidInput("witness must be an ellipsoid or a segment")


@dataclass
class Instance:
    dimension: int
    kind: str
    families: list  # lists of ConvexBody (or Segment for kind "segments")
    seed: int = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInput(f"unknown instance kind {self.kind!r}")
        if not isinstance(self.dimension, int) or self.dimension < 1:
            raise InvalidInput("dimension must be a positive integer")
        for f in self.families:
            for b in f:
                if b.dim != self.dimension:
                    raise InvalidInput("member dimension does not match instance dimension")

    @property
    def members(self):
        """All members, families concatenated."""
        return [b for f in self.families for b in f]

    def to_json(self):
        fams = []
        for f in self.families:
            if self.kind == "segments":
                fams.append([{"vertices": [point_json(s.a), point_json(s.b)]} for s in f])
            else:
                fams.append([{"vertices": [point_json(v) for v in b.vertices]} for b in f])
        out = {"dimension": self.dimension, "kind": self.kind, "families": fams, "metadata": dict(self.metadata)}
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    @classmethod
    def from_json(cls, obj):
        try:
            d, kind, fams = obj["dimension"], obj["kind"], obj["families"]
            families = []
            for f in fams:
                members = []
                for m in f:
                    verts = [rats(v) for v in m["vertices"]]
                    if any(len(v) != d for v in verts):
                        raise InvalidInput("vertex dimension mismatch")
                    if kind == "segments":
                        if len(verts) != 2:
                            raise InvalidInput("a segment has exactly two vertices")
                        members.append(Segment(*verts))
                    else:
                        members.append(ConvexBody(tuple(verts)))
                families.append(members)
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed instance: {exc}") from exc
        return cls(d, kind, families, obj.get("seed"), dict(obj.get("metadata", {})))

    def digest(self):
        return instance_hash(self.to_json())


def canonical(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def instance_hash(obj):
    core = {k: obj[k] for k in ("dimension", "kind", "families")}
    return hashlib.sha256(canonical(core).encode()).hexdigest()


@dataclass
class Certificate:
    kind: str
    instance_hash: str
    payload: dict
    achieved: dict

    def to_json(self):
        return {"kind": self.kind, "instanceHash": self.instance_hash, "payload": self.payload,
                "achievedBounds": self.achieved}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(obj["kind"], obj["instanceHash"], obj["payload"], obj["achievedBounds"])
        except (KeyError, TypeError) as exc:
            raise InvalidInput("malformed certificate") from exc


def write_text(path, text):
    """Write atomically: temp file in the target directory, then rename."""
    path = os.fspath(path)
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj):
    write_text(path, json.dumps(obj, indent=1, sort_keys=True) + "\n")


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: not valid JSON ({exc})") from exc


def load_instance(path):
    return Instance.from_json(read_json(path))


def load_certificate(path):
    return Certificate.from_json(read_json(path))
