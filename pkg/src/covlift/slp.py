"""Straight-line programs over a set of abstract generators.

A shared DAG of multiplication/inversion nodes keeps traced subgroup
elements compact across lifting rounds, where plain words would grow
exponentially.
"""


class Slp:
    def __init__(self, ngens):
        self.ngens = ngens
        self.nodes = [("one",)] + [("gen", j) for j in range(ngens)]
        self._memo = {node: i for i, node in enumerate(self.nodes)}

    def _intern(self, node):
        i = self._memo.get(node)
        if i is None:
            i = len(self.nodes)
            self.nodes.append(node)
            self._memo[node] = i
        return i

    def one(self):
        return 0

    def gen(self, j):
        return 1 + j

    def inv(self, i):
        node = self.nodes[i]
        if node[0] == "one":
            return i
        if node[0] == "inv":
            return node[1]
        return self._intern(("inv", i))

    def mul(self, i, j):
        if self.nodes[i][0] == "one":
            return j
        if self.nodes[j][0] == "one":
            return i
        return self._intern(("mul", i, j))

    def __len__(self):
        return len(self.nodes)

    def evaluate(self, images, mul, inv, one, wanted=None):
        """Evaluate nodes bottom-up; returns a dict node-index -> value.

        images: values of the generators; mul/inv/one: group operations.
        When `wanted` is given, only ancestors of those nodes are computed.
        """
        if wanted is None:
            needed = range(len(self.nodes))
        else:
            mark = set()
            stack = list(wanted)
            while stack:
                i = stack.pop()
                if i in mark:
                    continue
                mark.add(i)
                node = self.nodes[i]
                if node[0] in ("inv",):
                    stack.append(node[1])
                elif node[0] == "mul":
                    stack.extend(node[1:])
            needed = sorted(mark)
        values = {}
        for i in needed:
            node = self.nodes[i]
            if node[0] == "one":
                values[i] = one
            elif node[0] == "gen":
                values[i] = images[node[1]]
            elif node[0] == "inv":
                values[i] = inv(values[node[1]])
            else:
                values[i] = mul(values[node[1]], values[node[2]])
        return values
