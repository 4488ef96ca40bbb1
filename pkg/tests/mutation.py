"""Single-field certificate mutations for verifier tests."""
import copy
from fractions import Fraction


def _is_rational(s):
    try:
        Fraction(s)
        return True
    except (TypeError, ValueError, ZeroDivisionError):
        return False


def _tweak(x):
    if isinstance(x, bool):
        return not x
    if isinstance(x, int):
        return x + 1000
    if x is None:
        return "0"
    if isinstance(x, str):
        if _is_rational(x):
            f = Fraction(x) + 10
            return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
        return x + "-bogus"
    raise TypeError(type(x))


def _paths(obj, prefix=()):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _paths(v, prefix + (k,))
    elif isinstance(obj, list):
        if obj:
            yield prefix, "drop"
        for i, v in enumerate(obj):
            yield from _paths(v, prefix + (i,))
    else:
        yield prefix, "tweak"


def mutants(cert_json):
    """Yield (path, action, mutated copy) for every leaf and list in the certificate."""
    for path, action in _paths(cert_json):
        m = copy.deepcopy(cert_json)
        node = m
        for k in path[:-1]:
            node = node[k]
        if not path:
            continue
        if action == "drop":
            node[path[-1]] = node[path[-1]][:-1]
        else:
            node[path[-1]] = _tweak(node[path[-1]])
        yield path, action, m
