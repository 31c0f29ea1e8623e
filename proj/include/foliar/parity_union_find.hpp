#pragma once

#include <numeric>
#include <utility>
#include <vector>

namespace foliar {

/// Union-find over GF(2)-labelled nodes: records constraints x_a + x_b = p
/// and reports the first contradiction.
class ParityUnionFind {
public:
    explicit ParityUnionFind(int n) : parent_(n), parity_(n, 0), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    /// (root, parity of the node relative to its root)
    std::pair<int, int> find(int x) {
        int p = 0;
        int r = x;
        while (parent_[r] != r) {
            p ^= parity_[r];
            r = parent_[r];
        }
        // path compression, keeping parities relative to the root
        int acc = p;
        while (parent_[x] != x) {
            int next = parent_[x];
            int here = parity_[x];
            parent_[x] = r;
            parity_[x] = acc;
            acc ^= here;
            x = next;
        }
        return {r, p};
    }

    /// Adds x_a + x_b = parity. Returns false on contradiction.
    bool unite(int a, int b, int parity) {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        if (ra == rb) return (pa ^ pb) == parity;
        if (rank_[ra] < rank_[rb]) std::swap(ra, rb);
        parent_[rb] = ra;
        parity_[rb] = pa ^ pb ^ parity;
        if (rank_[ra] == rank_[rb]) ++rank_[ra];
        return true;
    }

    int size() const { return static_cast<int>(parent_.size()); }

private:
    std::vector<int> parent_;
    std::vector<int> parity_;
    std::vector<int> rank_;
};

}  // namespace foliar
