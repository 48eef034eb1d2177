"""Cylinder measures: the empirical construction and the stationary oracle.

The empirical measure at time n puts uniform mass on one representative
point per admissible n-word (the word followed by zeros, which every
state of a digit-expansion presentation admits) and averages the first n
shift images.  Its cylinder masses are computed exactly from automaton
occurrence counts as rationals with denominator n * |L_n|.

The stationary oracle is the Markov measure built from Perron eigendata of
the presentation: mass of a cylinder is a sum over start states of
stationary weight times an eigenvector ratio, divided by the eigenvalue
power.  With exact eigendata (rational or quadratic) the masses are exact
field elements; otherwise they are high-precision floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DepthError, InputError, NonMixingError
from .perron import perron_eigendata
from .words import Word, format_word, parse_word


@dataclass
class CylinderMeasure:
    """Masses of every admissible cylinder up to a fixed depth."""

    alphabet_size: int
    depth: int
    table: dict
    provenance: str
    exact: bool
    meta: dict = field(default_factory=dict)

    def mass(self, u: Word):
        """Exact-or-float mass of [u]; inadmissible and unseen words get 0."""
        u = tuple(u)
        if len(u) > self.depth:
            raise DepthError(
                f"cylinder depth {len(u)} exceeds measure depth {self.depth}"
            )
        return self.table.get(u, 0)

    def mass_float(self, u: Word) -> float:
        return float(self.mass(u))

    def words_at(self, length: int) -> list[Word]:
        if length > self.depth:
            raise DepthError(
                f"length {length} exceeds measure depth {self.depth}"
            )
        return sorted(w for w in self.table if len(w) == length)

    def pattern_mass(self, template):
        """Total mass of words matching a fixed/free position template."""
        if len(template) > self.depth:
            raise DepthError(
                f"pattern length {len(template)} exceeds measure depth {self.depth}"
            )
        total = 0
        for w in self.words_at(len(template)):
            if all(t is None or t == a for t, a in zip(template, w)):
                total = total + self.table[w]
        return total

    def joint_mass(self, u: Word, gap: int, v: Word):
        """Mass of [u] intersected with the gap-shifted cylinder of v."""
        return self.pattern_mass(tuple(u) + (None,) * gap + tuple(v))

    # -- serialization ---------------------------------------------------------

    def to_json_dict(self) -> dict:
        entries = []
        for w in sorted(self.table, key=lambda w: (len(w), w)):
            m = self.table[w]
            entry = {"word": format_word(w, self.alphabet_size)}
            if isinstance(m, (int, Fraction)):
                f = Fraction(m)
                entry["mass_num"] = str(f.numerator)
                entry["mass_den"] = str(f.denominator)
            else:
                entry["mass_float"] = f"{float(m):.17g}"
            entries.append(entry)
        return {
            "depth": self.depth,
            "alphabet_size": self.alphabet_size,
            "provenance": self.provenance,
            "entries": entries,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "CylinderMeasure":
        try:
            depth = int(data["depth"])
            alphabet = int(data.get("alphabet_size", 10))
            provenance = str(data["provenance"])
            entries = data["entries"]
            table = {}
            exact = True
            for entry in entries:
                w = parse_word(str(entry["word"]), alphabet)
                if "mass_num" in entry:
                    table[w] = Fraction(int(entry["mass_num"]), int(entry["mass_den"]))
                else:
                    table[w] = float(entry["mass_float"])
                    exact = False
            if () not in table:
                raise KeyError("entries")
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed measure file: {exc}") from exc
        return cls(
            alphabet_size=alphabet,
            depth=depth,
            table=table,
            provenance=provenance,
            exact=exact,
        )


def _verify_representative_tails(system) -> dict:
    """Check every live state extends; return a lex-min tail cache.

    On digit-expansion presentations the least continuation from any state
    is the zero tail, so representatives are word + 0^infinity there.
    """
    pres = system.presentation
    cache: dict = {}
    for s in range(pres.n_states):
        if s == pres.marker:
            continue
        if pres.lex_min_tail(s, 1) is None:
            raise InputError(
                f"state {s} admits no continuation; representative points undefined"
            )
    return cache


def _tail_prefix(pres, cache, state, length):
    key = (state, length)
    if key not in cache:
        cache[key] = pres.lex_min_tail(state, length)
    return cache[key]


def empirical_mme(system, n: int, depth: int) -> CylinderMeasure:
    """Time-n empirical measure with exact rational cylinder masses.

    Representative points are word + least admissible tail (the zero tail
    on digit-expansion systems; verified to exist).  The mass of [u] is
    (1/n) sum over shifts k < n of the fraction of length-n words whose
    representative lies in the k-fold shift preimage of [u]; window
    positions past n read the representative tail exactly.
    """
    if depth > n:
        raise InputError("measure depth cannot exceed n")
    if n < 1:
        raise InputError("n must be >= 1")
    tails = _verify_representative_tails(system)
    pres = system.presentation
    total_words = system.count_language(n)
    state_counts = [pres.state_counts(k) for k in range(n + 1)]
    denom = n * total_words

    table: dict[Word, Fraction] = {}
    for length in range(depth + 1):
        for u in system.enumerate_language(length, cap=None):
            acc = 0
            for k in range(n):
                if k + length <= n:
                    for s, c in enumerate(state_counts[k]):
                        if not c:
                            continue
                        t = pres.walk(u, state=s)
                        if t is not None:
                            acc += c * pres.extensions_from(t, n - k - length)
                else:
                    head = n - k
                    for s, c in enumerate(state_counts[k]):
                        if not c:
                            continue
                        t = pres.walk(u[:head], state=s)
                        if t is None:
                            continue
                        if u[head:] == _tail_prefix(pres, tails, t, length - head):
                            acc += c
            table[u] = Fraction(acc, denom)
    return CylinderMeasure(
        alphabet_size=system.alphabet_size,
        depth=depth,
        table=table,
        provenance=f"empirical({n})",
        exact=True,
        meta={"n": n},
    )


def parry_measure(system, depth: int) -> CylinderMeasure:
    """Stationary Markov measure from Perron eigendata of the presentation.

    Exact field arithmetic when the eigenvalue is rational or quadratic;
    high-precision floats otherwise.  Refuses non-primitive presentations.
    """
    pres = system.presentation
    if not pres.is_primitive():
        raise NonMixingError(
            "presentation is not primitive; no stationary construction"
        )
    live = pres.essential_part()
    eigen = perron_eigendata(live)
    lam, right = eigen.eigenvalue, eigen.right
    pi = eigen.stationary()
    table = {}
    for length in range(depth + 1):
        lam_pow = lam ** length
        for u in system.enumerate_language(length, cap=None):
            acc = None
            for s in range(live.n_states):
                t = live.walk(u, state=s)
                if t is None:
                    continue
                term = pi[s] * right[t] / (lam_pow * right[s])
                acc = term if acc is None else acc + term
            if acc is not None:
                table[u] = acc if eigen.exact else float(acc)
    if system.horizon is None:
        provenance = "parry-exact" if eigen.exact else "parry-numeric"
    else:
        provenance = (
            f"parry-truncated(horizon={system.horizon}, "
            f"residual={eigen.residual:.3g})"
        )
    return CylinderMeasure(
        alphabet_size=system.alphabet_size,
        depth=depth,
        table=table,
        provenance=provenance,
        exact=eigen.exact,
        meta={
            "eigenvalue": float(lam),
            "residual": eigen.residual,
            "exact_eigendata": eigen.exact,
        },
    )


def measure_entropy_rate(measure: CylinderMeasure, length: int) -> float:
    """(1/length) * sum of -m log m over length-cylinders."""
    total = 0.0
    for w in measure.words_at(length):
        m = float(measure.table[w])
        if m > 0:
            total -= m * math.log(m)
    return total / length


def max_depth_gap(a: CylinderMeasure, b: CylinderMeasure, length: int) -> float:
    """Largest absolute mass difference over cylinders of the given length."""
    words = set(a.words_at(length)) | set(b.words_at(length))
    return max(abs(a.mass_float(w) - b.mass_float(w)) for w in words)
