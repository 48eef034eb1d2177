"""Deterministic labeled-graph presentations of one-sided shift spaces.

A presentation is a right-resolving automaton: states 0..n-1, at most one
edge per (state, symbol), and a distinguished start state whose label
sequences are exactly the points of the shift.  Path counts, word
enumeration, and per-state extension counts are all exact big-integer
computations on this graph.

A presentation may carry a truncation marker: a state with no defined
outgoing edges, standing for "matched every stored symbol".  Any
computation that would have to move on from the marker fails loudly with
HorizonError instead of approximating.
"""

from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor

import networkx as nx

from .errors import EnumerationCapError, HorizonError
from .words import Word

DEFAULT_ENUMERATION_CAP = 24


def thread_cap() -> int:
    """Parallelism cap from OBSTRUCT_THREADS (>= 1)."""
    raw = os.environ.get("OBSTRUCT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


class Presentation:
    """Immutable deterministic labeled graph with a start state."""

    def __init__(self, n_states, alphabet_size, edges, start=0, marker=None):
        """edges: iterable of (state, symbol, state) triples."""
        self.n_states = n_states
        self.alphabet_size = alphabet_size
        self.start = start
        self.marker = marker
        self.delta: list[dict[int, int]] = [dict() for _ in range(n_states)]
        for s, a, t in edges:
            if a in self.delta[s] and self.delta[s][a] != t:
                raise ValueError(f"nondeterministic edge at state {s}, symbol {a}")
            self.delta[s][a] = t
        if marker is not None and self.delta[marker]:
            raise ValueError("marker state must have no outgoing edges")
        self._state_counts = [self._unit_vector(start)]
        self._ext = {0: [1] * n_states}
        self._lock = threading.Lock()  # guards lazy count-table growth

    def _unit_vector(self, s):
        v = [0] * self.n_states
        v[s] = 1
        return v

    # -- single-word queries ------------------------------------------------

    def step(self, state: int, symbol: int):
        """Next state, or None when the symbol is not readable."""
        if state == self.marker:
            raise HorizonError(
                "undecided at truncation: walk continues past the stored horizon"
            )
        return self.delta[state].get(symbol)

    def walk(self, word: Word, state: int | None = None):
        """Run `word` from `state` (default: start); None when rejected."""
        s = self.start if state is None else state
        for i, a in enumerate(word):
            if s == self.marker:
                raise HorizonError(
                    "undecided at truncation: "
                    f"{len(word) - i} symbols remain past the stored horizon"
                )
            s = self.delta[s].get(a)
            if s is None:
                return None
        return s

    def accepts(self, word: Word, state: int | None = None) -> bool:
        return self.walk(word, state) is not None

    # -- exact counting -------------------------------------------------------

    def state_counts(self, n: int) -> list[int]:
        """Vector of path counts of length n from the start state."""
        with self._lock:
            while len(self._state_counts) <= n:
                cur = self._state_counts[-1]
                if self.marker is not None and cur[self.marker]:
                    raise HorizonError(
                        "path counting would continue past the stored horizon",
                        certified=len(self._state_counts) - 1,
                    )
                new = [0] * self.n_states
                for s, c in enumerate(cur):
                    if c:
                        for t in self.delta[s].values():
                            new[t] += c
                self._state_counts.append(new)
            return self._state_counts[n]

    def count_words(self, n: int) -> int:
        return sum(self.state_counts(n))

    def extension_counts(self, j: int) -> list:
        """Per-state counts of length-j continuations; None marks poisoned states."""
        with self._lock:
            while max(self._ext) < j:
                m = max(self._ext)
                prev = self._ext[m]
                new = []
                for s in range(self.n_states):
                    if s == self.marker:
                        new.append(None)
                        continue
                    total = 0
                    for t in self.delta[s].values():
                        if prev[t] is None:
                            total = None
                            break
                        total += prev[t]
                    new.append(total)
                self._ext[m + 1] = new
            return self._ext[j]

    def extensions_from(self, state: int, j: int) -> int:
        c = self.extension_counts(j)[state]
        if c is None:
            raise HorizonError(
                "extension counting would continue past the stored horizon"
            )
        return c

    # -- enumeration ------------------------------------------------------------

    def enumerate_words(self, n: int, cap: int | None = DEFAULT_ENUMERATION_CAP):
        """All length-n label sequences from the start state, sorted."""
        if cap is not None and n > cap:
            raise EnumerationCapError(
                f"enumeration of length {n} exceeds cap {cap}; "
                "count_language gives exact sizes without materializing words"
            )
        if n == 0:
            return [()]
        shards = sorted(self.delta[self.start])
        workers = min(thread_cap(), len(shards)) if shards else 1
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                parts = pool.map(
                    lambda a: self._dfs((a,), self.delta[self.start][a], n), shards
                )
                out = [w for part in parts for w in part]
        else:
            out = self._dfs((), self.start, n)
        return out

    def _dfs(self, prefix, state, n):
        if len(prefix) == n:
            return [prefix]
        if state == self.marker:
            raise HorizonError(
                "enumeration would continue past the stored horizon"
            )
        out = []
        for a in sorted(self.delta[state]):
            out.extend(self._dfs(prefix + (a,), self.delta[state][a], n))
        return out

    def tails(self, state: int, length: int) -> list[Word]:
        """All length-`length` continuations from `state`, sorted."""
        return self._dfs((), state, length)

    def lex_min_tail(self, state: int, length: int) -> Word | None:
        """Lexicographically least length-`length` continuation from `state`."""
        if length == 0:
            return ()
        if state == self.marker:
            return None
        for a in sorted(self.delta[state]):
            tail = self.lex_min_tail(self.delta[state][a], length - 1)
            if tail is not None:
                return (a,) + tail
        return None

    # -- graph structure ----------------------------------------------------------

    def edges(self):
        for s in range(self.n_states):
            for a in sorted(self.delta[s]):
                yield s, a, self.delta[s][a]

    def adjacency(self) -> list[list[int]]:
        m = [[0] * self.n_states for _ in range(self.n_states)]
        for s, _, t in self.edges():
            m[s][t] += 1
        return m

    def live_part(self) -> "Presentation":
        """Copy without the marker state and its incoming edges."""
        if self.marker is None:
            return self
        keep = [s for s in range(self.n_states) if s != self.marker]
        index = {s: i for i, s in enumerate(keep)}
        edges = [
            (index[s], a, index[t])
            for s, a, t in self.edges()
            if s != self.marker and t != self.marker
        ]
        return Presentation(len(keep), self.alphabet_size, edges,
                            start=index[self.start])

    def essential_part(self) -> "Presentation":
        """Iteratively drop states with no outgoing edge (marker first)."""
        live = self.live_part()
        dead: set[int] = set()
        changed = True
        while changed:
            changed = False
            for s in range(live.n_states):
                if s in dead:
                    continue
                if not any(t not in dead for t in live.delta[s].values()):
                    dead.add(s)
                    changed = True
        if live.start in dead:
            raise HorizonError("no infinite continuation from the start state")
        keep = [s for s in range(live.n_states) if s not in dead]
        index = {s: i for i, s in enumerate(keep)}
        edges = [
            (index[s], a, index[t])
            for s, a, t in live.edges()
            if s not in dead and t not in dead
        ]
        return Presentation(len(keep), self.alphabet_size, edges,
                            start=index[live.start])

    def digraph(self) -> "nx.MultiDiGraph":
        g = nx.MultiDiGraph()
        g.add_nodes_from(range(self.n_states))
        for s, a, t in self.edges():
            g.add_edge(s, t, label=a)
        return g

    def is_primitive(self) -> bool:
        """Essential part strongly connected and aperiodic."""
        try:
            core = self.essential_part()
        except HorizonError:
            return False
        g = nx.DiGraph()
        g.add_nodes_from(range(core.n_states))
        g.add_edges_from((s, t) for s, _, t in core.edges())
        if g.number_of_nodes() == 1:
            return g.has_edge(0, 0)
        return nx.is_strongly_connected(g) and nx.is_aperiodic(g)

    def dump_edges_csv(self, path) -> None:
        """Edge list as `state,symbol,state` rows."""
        with open(path, "w", encoding="ascii") as fh:
            for s, a, t in self.edges():
                fh.write(f"{s},{a},{t}\n")

    def __repr__(self):
        n_edges = sum(len(d) for d in self.delta)
        extra = ", truncated" if self.marker is not None else ""
        return (
            f"Presentation({self.n_states} states, {n_edges} edges, "
            f"alphabet {self.alphabet_size}{extra})"
        )
