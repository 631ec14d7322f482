#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace liesym {

/// Sorted multiset of axis indices identifying a jet variable u_{i1...ik}.
/// The empty index stands for u itself. Mixed partials commute, so two
/// indices are equal iff their sorted lists are.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> axes) : axes_(std::move(axes)) {
        std::sort(axes_.begin(), axes_.end());
    }

    std::size_t order() const { return axes_.size(); }
    bool empty() const { return axes_.empty(); }
    const std::vector<int>& axes() const { return axes_; }

    MultiIndex appended(int axis) const {
        std::vector<int> a = axes_;
        a.insert(std::upper_bound(a.begin(), a.end(), axis), axis);
        MultiIndex r;
        r.axes_ = std::move(a);
        return r;
    }

    /// Multiset with one occurrence of the largest axis removed; only valid
    /// for non-empty indices.
    MultiIndex without_last() const {
        MultiIndex r = *this;
        r.axes_.pop_back();
        return r;
    }
    int last() const { return axes_.back(); }

    int count(int axis) const {
        return static_cast<int>(std::count(axes_.begin(), axes_.end(), axis));
    }

    /// Graded-lex: first by order, then lexicographically on the sorted axes.
    static int cmp(const MultiIndex& a, const MultiIndex& b) {
        if (a.order() != b.order()) return a.order() < b.order() ? -1 : 1;
        if (a.axes_ < b.axes_) return -1;
        if (b.axes_ < a.axes_) return 1;
        return 0;
    }
    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return cmp(a, b) == 0; }
    friend bool operator!=(const MultiIndex& a, const MultiIndex& b) { return cmp(a, b) != 0; }
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) { return cmp(a, b) < 0; }

    /// Enumerates all sorted multi-indices of the given order over axes 0..n-1.
    static std::vector<MultiIndex> all_of_order(int n, int order) {
        std::vector<MultiIndex> out;
        std::vector<int> cur;
        enumerate(n, order, 0, cur, out);
        return out;
    }

private:
    std::vector<int> axes_;

    static void enumerate(int n, int order, int start, std::vector<int>& cur,
                          std::vector<MultiIndex>& out) {
        if (order == 0) {
            MultiIndex m;
            m.axes_ = cur;
            out.push_back(m);
            return;
        }
        for (int a = start; a < n; ++a) {
            cur.push_back(a);
            enumerate(n, order - 1, a, cur, out);
            cur.pop_back();
        }
    }
};

}  // namespace liesym
