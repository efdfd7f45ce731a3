#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "cdfi/norms.hpp"

namespace cdfi {

namespace {

constexpr int kMaxRank = kMaxDim + 1;
constexpr long kLeafSize = 24;
constexpr std::size_t kMaxTable = std::size_t{1} << 23;

// Values on a dense box of rank r. Axis 0 is time-like when `timed` is set,
// i.e. contributes sqrt(|dn| * step[0]) to the distance; all other axes are
// combined euclidean.
struct Lattice {
    int rank = 1;
    bool timed = true;
    std::array<long, kMaxRank> ext{};
    std::array<double, kMaxRank> step{};
    std::vector<double> v;

    std::size_t index(const std::array<long, kMaxRank>& p) const {
        std::size_t off = 0;
        for (int k = 0; k < rank; ++k) off = off * static_cast<std::size_t>(ext[k]) + static_cast<std::size_t>(p[k]);
        return off;
    }
    // Distance from per-axis index gaps.
    double distance(const std::array<long, kMaxRank>& gap) const {
        double s = 0.0, tdist = 0.0;
        for (int k = 0; k < rank; ++k) {
            const double g = static_cast<double>(gap[k]);
            if (k == 0 && timed)
                tdist = std::sqrt(g * step[0]);
            else
                s += g * g * step[k] * step[k];
        }
        return std::max(std::sqrt(s), tdist);
    }
    double extent_length(int k, long len) const {
        return (k == 0 && timed) ? std::sqrt(static_cast<double>(len) * step[0]) : static_cast<double>(len) * step[k];
    }
};

struct TreeNode {
    std::array<long, kMaxRank> lo{}, hi{};  // inclusive
    double vmin = 0.0, vmax = 0.0;
    int left = -1, right = -1;
    long count = 0;
};

class HolderSearch {
public:
    HolderSearch(const Lattice& lat, double alpha, double dmin, double dmax, double rel_tol = 0.0)
        : lat_(lat), alpha_(alpha), dmin_(dmin), dmax_(dmax), slack_(1.0 + rel_tol) {
        TreeNode root;
        for (int k = 0; k < lat.rank; ++k) {
            root.lo[k] = 0;
            root.hi[k] = lat.ext[k] - 1;
        }
        nodes_.reserve(2 * lat.v.size() / kLeafSize + 16);
        build(root);
        dmin_pow_ = std::pow(dmin, -alpha);
        tabulate();
    }

    double run() {
        best_ = 0.0;
        seed_neighbours();
        struct Item {
            double bound;
            int a, b;
            bool operator<(const Item& o) const { return bound < o.bound; }
        };
        std::priority_queue<Item> queue;
        auto push = [&](int a, int b) {
            const double bd = pair_bound(a, b);
            if (bd > best_ * slack_) queue.push({bd, a, b});
        };
        push(0, 0);
        while (!queue.empty()) {
            const Item it = queue.top();
            queue.pop();
            if (it.bound <= best_ * slack_) break;
            const TreeNode& A = nodes_[it.a];
            const TreeNode& B = nodes_[it.b];
            const bool leafA = A.left < 0, leafB = B.left < 0;
            if (it.a == it.b) {
                if (leafA) {
                    brute(A, B, true);
                } else {
                    push(A.left, A.left);
                    push(A.right, A.right);
                    push(A.left, A.right);
                }
            } else if (leafA && leafB) {
                brute(A, B, false);
            } else if (!leafA && (leafB || A.count >= B.count)) {
                push(A.left, it.b);
                push(A.right, it.b);
            } else {
                push(it.a, B.left);
                push(it.a, B.right);
            }
        }
        return best_;
    }

private:
    int build(TreeNode node) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back(node);
        long count = 1;
        int axis = 0;
        double widest = -1.0;
        for (int k = 0; k < lat_.rank; ++k) {
            const long len = node.hi[k] - node.lo[k] + 1;
            count *= len;
            if (len > 1) {
                const double w = lat_.extent_length(k, len - 1);
                if (w > widest) {
                    widest = w;
                    axis = k;
                }
            }
        }
        nodes_[id].count = count;
        if (count <= kLeafSize || widest < 0.0) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            visit(node, [&](std::size_t off) {
                lo = std::min(lo, lat_.v[off]);
                hi = std::max(hi, lat_.v[off]);
            });
            nodes_[id].vmin = lo;
            nodes_[id].vmax = hi;
            return id;
        }
        const long mid = (node.lo[axis] + node.hi[axis]) / 2;
        TreeNode l = node, r = node;
        l.hi[axis] = mid;
        r.lo[axis] = mid + 1;
        const int li = build(l);
        const int ri = build(r);
        nodes_[id].left = li;
        nodes_[id].right = ri;
        nodes_[id].vmin = std::min(nodes_[li].vmin, nodes_[ri].vmin);
        nodes_[id].vmax = std::max(nodes_[li].vmax, nodes_[ri].vmax);
        return id;
    }

    template <class F>
    void visit(const TreeNode& node, F&& f) const {
        std::array<long, kMaxRank> p = node.lo;
        while (true) {
            f(lat_.index(p));
            int k = lat_.rank - 1;
            while (k >= 0 && p[k] == node.hi[k]) {
                p[k] = node.lo[k];
                --k;
            }
            if (k < 0) return;
            ++p[k];
        }
    }

    double pair_bound(int a, int b) const {
        const TreeNode& A = nodes_[a];
        const TreeNode& B = nodes_[b];
        std::array<long, kMaxRank> gap{}, span{};
        for (int k = 0; k < lat_.rank; ++k) {
            gap[k] = std::max({0L, B.lo[k] - A.hi[k], A.lo[k] - B.hi[k]});
            span[k] = std::max(A.hi[k], B.hi[k]) - std::min(A.lo[k], B.lo[k]);
        }
        const double near = lat_.distance(gap);
        if (near > dmax_) return -1.0;
        if (lat_.distance(span) < dmin_) return -1.0;
        const double diff = std::max(A.vmax - B.vmin, B.vmax - A.vmin);
        if (diff <= 0.0) return 0.0;
        return diff / std::pow(std::max(near, dmin_), alpha_);
    }

    // dist^{-alpha} by index gap, tabulated when the lattice is small enough.
    void tabulate() {
        std::size_t total = 1;
        for (int k = 0; k < lat_.rank; ++k) total *= static_cast<std::size_t>(lat_.ext[k]);
        if (total > kMaxTable) return;
        inv_pow_.assign(total, 0.0);
        std::array<long, kMaxRank> g{};
        for (std::size_t q = 0; q < total; ++q) {
            std::size_t r = q;
            for (int k = lat_.rank - 1; k >= 0; --k) {
                g[k] = static_cast<long>(r % static_cast<std::size_t>(lat_.ext[k]));
                r /= static_cast<std::size_t>(lat_.ext[k]);
            }
            const double dist = lat_.distance(g);
            inv_pow_[q] = (dist < dmin_ || dist > dmax_) ? 0.0 : std::pow(dist, -alpha_);
        }
    }

    double inv_pow(const std::array<long, kMaxRank>& gap) const {
        if (!inv_pow_.empty()) return inv_pow_[lat_.index(gap)];
        const double dist = lat_.distance(gap);
        return (dist < dmin_ || dist > dmax_) ? 0.0 : std::pow(dist, -alpha_);
    }

    void consider(std::size_t pa, const std::array<long, kMaxRank>& a, std::size_t pb,
                  const std::array<long, kMaxRank>& b) {
        const double dv = std::abs(lat_.v[pa] - lat_.v[pb]);
        if (dv * dmin_pow_ <= best_) return;
        std::array<long, kMaxRank> gap{};
        for (int k = 0; k < lat_.rank; ++k) gap[k] = std::abs(a[k] - b[k]);
        const double q = dv * inv_pow(gap);
        if (q > best_) best_ = q;
    }

    struct LeafPoint {
        std::size_t off;
        std::array<long, kMaxRank> p;
    };

    void brute(const TreeNode& A, const TreeNode& B, bool same) {
        const int na = collect(A, leaf_a_);
        const int nb = same ? na : collect(B, leaf_b_);
        const LeafPoint* other = same ? leaf_a_.data() : leaf_b_.data();
        for (int x = 0; x < na; ++x)
            for (int y = same ? x + 1 : 0; y < nb; ++y)
                consider(leaf_a_[x].off, leaf_a_[x].p, other[y].off, other[y].p);
    }

    int collect(const TreeNode& node, std::array<LeafPoint, kLeafSize>& out) const {
        int c = 0;
        std::array<long, kMaxRank> p = node.lo;
        while (true) {
            out[c++] = {lat_.index(p), p};
            int k = lat_.rank - 1;
            while (k >= 0 && p[k] == node.hi[k]) {
                p[k] = node.lo[k];
                --k;
            }
            if (k < 0) return c;
            ++p[k];
        }
    }

    // Cheap lower bound from pairs at the smallest admissible offset along each axis.
    void seed_neighbours() {
        for (int k = 0; k < lat_.rank; ++k) {
            std::array<long, kMaxRank> off{};
            long s = 1;
            while (true) {
                off[k] = s;
                if (lat_.distance(off) >= dmin_) break;
                ++s;
            }
            if (lat_.distance(off) > dmax_ || s >= lat_.ext[k]) continue;
            TreeNode all;
            for (int j = 0; j < lat_.rank; ++j) {
                all.lo[j] = 0;
                all.hi[j] = lat_.ext[j] - 1;
            }
            all.hi[k] -= s;
            std::array<long, kMaxRank> p = all.lo;
            while (true) {
                std::array<long, kMaxRank> q = p;
                q[k] += s;
                consider(lat_.index(p), p, lat_.index(q), q);
                int j = lat_.rank - 1;
                while (j >= 0 && p[j] == all.hi[j]) {
                    p[j] = all.lo[j];
                    --j;
                }
                if (j < 0) break;
                ++p[j];
            }
        }
    }

    const Lattice& lat_;
    double alpha_, dmin_, dmax_, slack_;
    double dmin_pow_ = 0.0;  // max admissible dist^{-alpha}
    double best_ = 0.0;
    std::vector<TreeNode> nodes_;
    std::vector<double> inv_pow_;
    std::array<LeafPoint, kLeafSize> leaf_a_{}, leaf_b_{};
};

Lattice lattice_from(const ScalarField& h, const IndexBox& region) {
    if (region.empty()) throw std::invalid_argument("empty region");
    if (!h.box().contains(region)) throw std::invalid_argument("region outside the field's support");
    Lattice lat;
    lat.rank = region.d + 1;
    lat.timed = true;
    lat.ext[0] = region.nt();
    lat.step[0] = h.grid().dt;
    for (int k = 0; k < region.d; ++k) {
        lat.ext[k + 1] = region.nx(k);
        lat.step[k + 1] = h.grid().dx;
    }
    lat.v = h.restrict_to(region).values();
    return lat;
}

double resolve_min(const ScalarField& h, const HolderOptions& opt) {
    return opt.min_distance > 0.0 ? opt.min_distance : 2.0 * h.grid().dx;
}

}  // namespace

double sup_norm(const ScalarField& h, const IndexBox& region) {
    if (region.empty()) throw std::invalid_argument("empty region");
    if (!h.box().contains(region)) throw std::invalid_argument("region outside the field's support");
    double m = 0.0;
    if (region.d == 1) {
        for (long n = region.n0; n <= region.n1; ++n) {
            const double* r = h.row(n).data() + (region.i0[0] - h.box().i0[0]);
            for (long i = 0; i < region.nx(0); ++i) m = std::max(m, std::abs(r[i]));
        }
        return m;
    }
    for_each_node(region, [&](long n, const long* i) { m = std::max(m, std::abs(h.at(n, i))); });
    return m;
}

double holder_seminorm(const ScalarField& h, double alpha, const IndexBox& region, const HolderOptions& opt) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
    const Lattice lat = lattice_from(h, region);
    const double dmin = resolve_min(h, opt) * (1.0 - 1e-12);
    std::array<long, kMaxRank> span{};
    for (int k = 0; k < lat.rank; ++k) span[k] = lat.ext[k] - 1;
    if (lat.distance(span) < dmin) throw std::invalid_argument("region has no admissible pair");
    if (opt.rel_tolerance < 0.0) throw std::invalid_argument("rel_tolerance must be nonnegative");
    HolderSearch search(lat, alpha, dmin, opt.max_distance * (1.0 + 1e-12), opt.rel_tolerance);
    return search.run();
}

double holder_seminorm_brute(const ScalarField& h, double alpha, const IndexBox& region, const HolderOptions& opt) {
    const Lattice lat = lattice_from(h, region);
    const double dmin = resolve_min(h, opt) * (1.0 - 1e-12);
    const double dmax = opt.max_distance * (1.0 + 1e-12);
    std::vector<std::array<long, kMaxRank>> pts;
    pts.reserve(lat.v.size());
    std::array<long, kMaxRank> p{};
    for (std::size_t q = 0; q < lat.v.size(); ++q) {
        std::size_t r = q;
        for (int k = lat.rank - 1; k >= 0; --k) {
            p[k] = static_cast<long>(r % static_cast<std::size_t>(lat.ext[k]));
            r /= static_cast<std::size_t>(lat.ext[k]);
        }
        pts.push_back(p);
    }
    double best = 0.0;
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b) {
            std::array<long, kMaxRank> gap{};
            for (int k = 0; k < lat.rank; ++k) gap[k] = std::abs(pts[a][k] - pts[b][k]);
            const double dist = lat.distance(gap);
            if (dist < dmin || dist > dmax) continue;
            best = std::max(best, std::abs(lat.v[a] - lat.v[b]) / std::pow(dist, alpha));
        }
    return best;
}

double holder_seminorm_1d(const std::vector<double>& v, double spacing, double alpha, long min_sep) {
    if (v.size() < 2) throw std::invalid_argument("need at least two samples");
    Lattice lat;
    lat.rank = 1;
    lat.timed = false;
    lat.ext[0] = static_cast<long>(v.size());
    lat.step[0] = spacing;
    lat.v = v;
    HolderSearch search(lat, alpha, static_cast<double>(min_sep) * spacing * (1.0 - 1e-12),
                        std::numeric_limits<double>::infinity());
    return search.run();
}

}  // namespace cdfi
