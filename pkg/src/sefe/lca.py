"""Static queries on a rooted tree: depth, lca, level ancestors.

Built once from a parent array.  Lowest common ancestors are answered by
range-minimum over an Euler tour, level ancestors by binary lifting; both
are O(1) resp. O(log n) per query after O(n log n) preprocessing, which is
what the sweep over quadratically many cycle pairs needs to stay cheap.
"""

from __future__ import annotations

from .errors import InternalInvariant


class TreeIndex:
    def __init__(self, parent: list[int], root: int):
        n = len(parent)
        self.parent = parent
        self.root = root
        children: list[list[int]] = [[] for _ in range(n)]
        for v, p in enumerate(parent):
            if v == root:
                continue
            children[p].append(v)
        self.children = children

        self.depth = [0] * n
        self.order: list[int] = []         # preorder
        self._tour: list[int] = []         # Euler tour of node ids
        self._first = [-1] * n
        stack: list[tuple[int, int]] = [(root, 0)]
        # iterative DFS emitting the node again after each child returns
        while stack:
            v, ci = stack.pop()
            if ci == 0:
                self.order.append(v)
                self._first[v] = len(self._tour)
            self._tour.append(v)
            if ci < len(children[v]):
                stack.append((v, ci + 1))
                c = children[v][ci]
                self.depth[c] = self.depth[v] + 1
                stack.append((c, 0))
        if len(self.order) != n:
            raise InternalInvariant("parent array is not a tree on the root")

        # sparse table of minimum-depth nodes over the tour
        m = len(self._tour)
        self._log = [0] * (m + 1)
        for i in range(2, m + 1):
            self._log[i] = self._log[i // 2] + 1
        table = [self._tour[:]]
        span = 1
        while 2 * span <= m:
            prev = table[-1]
            row = [
                min(prev[i], prev[i + span], key=self.depth.__getitem__)
                for i in range(m - 2 * span + 1)
            ]
            table.append(row)
            span *= 2
        self._table = table

        # binary lifting for level-ancestor queries
        self._up = [parent[:]]
        self._up[0][root] = root
        k = 1
        while (1 << k) <= n:
            prev = self._up[-1]
            self._up.append([prev[prev[v]] for v in range(n)])
            k += 1

    def lca(self, a: int, b: int) -> int:
        i, j = self._first[a], self._first[b]
        if i > j:
            i, j = j, i
        k = self._log[j - i + 1]
        return min(self._table[k][i], self._table[k][j + 1 - (1 << k)],
                   key=self.depth.__getitem__)

    def ancestor_at_depth(self, v: int, d: int) -> int:
        delta = self.depth[v] - d
        if delta < 0:
            raise InternalInvariant("ancestor below the node")
        k = 0
        while delta:
            if delta & 1:
                v = self._up[k][v]
            delta >>= 1
            k += 1
        return v

    def child_toward(self, anc: int, v: int) -> int:
        """The child of ``anc`` on the path down to ``v``."""
        if self.depth[v] <= self.depth[anc]:
            raise InternalInvariant("node is not strictly below the ancestor")
        return self.ancestor_at_depth(v, self.depth[anc] + 1)

    def on_path(self, a: int, b: int, v: int) -> bool:
        """Whether v lies on the tree path between a and b (inclusive)."""
        w = self.lca(a, b)
        if self.depth[v] < self.depth[w]:
            return False
        return (self.lca(a, v) == v and self.lca(v, b) == w) or \
               (self.lca(b, v) == v and self.lca(v, a) == w)
