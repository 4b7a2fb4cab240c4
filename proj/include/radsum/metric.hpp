#pragma once
// Point sets with L_p or explicit-matrix distances, metric-axiom validation,
// and the instance type shared by every solver.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace radsum {

// Thrown when a requested problem has no solution (e.g. a radius lower bound
// larger than half the closest pair distance). The CLI maps it to exit 3.
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// L_p norm, 1 <= p <= infinity.
struct LpNorm {
    double p = 2.0;

    static LpNorm l1() { return LpNorm{1.0}; }
    static LpNorm l2() { return LpNorm{2.0}; }
    static LpNorm linf() { return LpNorm{std::numeric_limits<double>::infinity()}; }
    static LpNorm lp(double p) {
        if (!(p >= 1.0))
            throw std::invalid_argument("LpNorm: p must be >= 1");
        return LpNorm{p};
    }

    bool is_inf() const { return std::isinf(p); }

    // norm of the componentwise difference a - b
    double operator()(std::span<const double> a, std::span<const double> b) const {
        if (a.size() != b.size())
            throw std::invalid_argument("LpNorm: dimension mismatch");
        if (p == 2.0) {
            double s = 0.0;
            for (size_t k = 0; k < a.size(); ++k) {
                const double d = a[k] - b[k];
                s += d * d;
            }
            return std::sqrt(s);
        }
        if (p == 1.0) {
            double s = 0.0;
            for (size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
            return s;
        }
        if (is_inf()) {
            double s = 0.0;
            for (size_t k = 0; k < a.size(); ++k) s = std::max(s, std::abs(a[k] - b[k]));
            return s;
        }
        double s = 0.0;
        for (size_t k = 0; k < a.size(); ++k) s += std::pow(std::abs(a[k] - b[k]), p);
        return std::pow(s, 1.0 / p);
    }
};

struct TriangleViolation {
    int i, k, j;   // d(i,j) > d(i,k) + d(k,j)
    double slack;  // amount of the violation
};

struct MetricReport {
    bool square = true;
    bool symmetric = true;
    bool nonnegative = true;
    bool zero_diagonal = true;
    std::vector<TriangleViolation> triangle_violations;

    bool ok() const {
        return square && symmetric && nonnegative && zero_diagonal &&
               triangle_violations.empty();
    }
};

// Relative tolerance used when validating explicit distance matrices.
inline double triangle_tolerance(double max_entry) { return 1e-9 * max_entry; }

// Full O(n^3) scan of the metric axioms. Never throws; findings go in the report.
inline MetricReport check_metric_axioms(const std::vector<std::vector<double>>& m) {
    MetricReport rep;
    const size_t n = m.size();
    double max_entry = 0.0;
    for (const auto& row : m) {
        if (row.size() != n) rep.square = false;
        for (double v : row) max_entry = std::max(max_entry, std::abs(v));
    }
    if (!rep.square) return rep;
    const double eps = triangle_tolerance(max_entry);
    for (size_t i = 0; i < n; ++i) {
        if (std::abs(m[i][i]) > eps) rep.zero_diagonal = false;
        for (size_t j = 0; j < n; ++j) {
            if (m[i][j] < -eps) rep.nonnegative = false;
            if (j > i && std::abs(m[i][j] - m[j][i]) > eps) rep.symmetric = false;
        }
    }
    if (!(rep.symmetric && rep.nonnegative && rep.zero_diagonal)) return rep;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            for (size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const double slack = m[i][j] - (m[i][k] + m[k][j]);
                if (slack > eps)
                    rep.triangle_violations.push_back(
                        {static_cast<int>(i), static_cast<int>(k), static_cast<int>(j), slack});
            }
    return rep;
}

enum class MetricKind { coordinates, matrix };

// Immutable after construction; safe to share across concurrent readers.
class MetricInstance {
  public:
    static MetricInstance from_points(const std::vector<std::vector<double>>& pts,
                                      LpNorm norm = LpNorm::l2()) {
        if (pts.empty())
            throw std::invalid_argument("instance needs at least one point");
        if (!(norm.p >= 1.0))
            throw std::invalid_argument("LpNorm: p must be >= 1");
        MetricInstance inst;
        inst.kind_ = MetricKind::coordinates;
        inst.n_ = static_cast<int>(pts.size());
        inst.dim_ = static_cast<int>(pts[0].size());
        if (inst.dim_ == 0)
            throw std::invalid_argument("points must have dimension >= 1");
        inst.norm_ = norm;
        inst.coords_.reserve(static_cast<size_t>(inst.n_) * inst.dim_);
        for (const auto& pt : pts) {
            if (static_cast<int>(pt.size()) != inst.dim_)
                throw std::invalid_argument("dimension mismatch between points");
            for (double c : pt) {
                if (!std::isfinite(c))
                    throw std::invalid_argument("non-finite coordinate");
                inst.coords_.push_back(c);
            }
        }
        return inst;
    }

    static MetricInstance from_matrix(const std::vector<std::vector<double>>& m) {
        if (m.empty())
            throw std::invalid_argument("instance needs at least one point");
        MetricReport rep = check_metric_axioms(m);
        if (!rep.square)
            throw std::invalid_argument("distance matrix is not square");
        if (!rep.symmetric)
            throw std::invalid_argument("distance matrix is not symmetric");
        if (!rep.nonnegative)
            throw std::invalid_argument("distance matrix has a negative entry");
        if (!rep.zero_diagonal)
            throw std::invalid_argument("distance matrix has a nonzero diagonal entry");
        if (!rep.triangle_violations.empty()) {
            const auto& v = rep.triangle_violations.front();
            std::ostringstream os;
            os << "triangle inequality violated at (" << v.i << "," << v.k << "," << v.j
               << ") by " << v.slack;
            throw std::invalid_argument(os.str());
        }
        MetricInstance inst;
        inst.kind_ = MetricKind::matrix;
        inst.n_ = static_cast<int>(m.size());
        inst.matrix_.reserve(static_cast<size_t>(inst.n_) * inst.n_);
        for (const auto& row : m)
            for (double v : row) inst.matrix_.push_back(v);
        return inst;
    }

    int size() const { return n_; }
    MetricKind kind() const { return kind_; }
    bool has_coordinates() const { return kind_ == MetricKind::coordinates; }
    int dimension() const { return dim_; }

    std::span<const double> point(int i) const {
        check_index(i);
        return {coords_.data() + static_cast<size_t>(i) * dim_, static_cast<size_t>(dim_)};
    }

    const LpNorm& norm() const { return norm_; }

    // Exact symmetry guaranteed by always evaluating with min(i,j) first.
    double distance(int i, int j) const {
        check_index(i);
        check_index(j);
        if (i == j) return 0.0;
        const int lo = std::min(i, j), hi = std::max(i, j);
        if (kind_ == MetricKind::matrix)
            return matrix_[static_cast<size_t>(lo) * n_ + hi];
        return norm_(point(lo), point(hi));
    }

    double diameter() const {
        if (n_ < 2)
            throw std::invalid_argument("diameter needs n >= 2");
        double d = 0.0;
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j) d = std::max(d, distance(i, j));
        return d;
    }

    // Cheap O(n) upper bound on the diameter; the exact value for matrix
    // instances, the bounding-box extent for coordinate instances.
    double diameter_bound() const {
        if (n_ < 2) return 0.0;
        if (kind_ == MetricKind::matrix) return diameter();
        std::vector<double> lo(point(0).begin(), point(0).end());
        std::vector<double> hi = lo;
        for (int i = 1; i < n_; ++i) {
            auto p = point(i);
            for (int k = 0; k < dim_; ++k) {
                lo[k] = std::min(lo[k], p[k]);
                hi[k] = std::max(hi[k], p[k]);
            }
        }
        return norm_(hi, lo);
    }

    // Default feasibility tolerance for ball assignments on this instance.
    double feasibility_eps() const { return 1e-8 * (1.0 + diameter_bound()); }

  private:
    void check_index(int i) const {
        if (i < 0 || i >= n_)
            throw std::out_of_range("point index out of range");
    }

    MetricKind kind_ = MetricKind::coordinates;
    int n_ = 0;
    int dim_ = 0;
    LpNorm norm_;
    std::vector<double> coords_;  // n * dim, coordinate kind
    std::vector<double> matrix_;  // n * n, matrix kind
};

namespace detail {

// Strips '#' comments, returns whitespace-separated tokens per line.
inline std::vector<std::vector<std::string>> tokenize_lines(std::istream& in) {
    std::vector<std::vector<std::string>> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (!toks.empty()) lines.push_back(std::move(toks));
    }
    return lines;
}

inline double parse_number(const std::string& s) {
    size_t used = 0;
    double v;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("expected a number, got '" + s + "'");
    }
    if (used != s.size())
        throw std::invalid_argument("expected a number, got '" + s + "'");
    return v;
}

}  // namespace detail

// Point file: one point per line, whitespace-separated coordinates, '#'
// comments, dimension inferred from the first line.
inline MetricInstance load_points(std::istream& in, LpNorm norm = LpNorm::l2()) {
    auto lines = detail::tokenize_lines(in);
    if (lines.empty())
        throw std::invalid_argument("point file contains no points");
    std::vector<std::vector<double>> pts;
    pts.reserve(lines.size());
    const size_t dim = lines[0].size();
    for (const auto& toks : lines) {
        if (toks.size() != dim)
            throw std::invalid_argument("dimension mismatch in point file");
        std::vector<double> p;
        p.reserve(dim);
        for (const auto& t : toks) p.push_back(detail::parse_number(t));
        pts.push_back(std::move(p));
    }
    return MetricInstance::from_points(pts, norm);
}

// Matrix file: first line n, then n rows of n numbers ('#' comments allowed).
inline MetricInstance load_matrix(std::istream& in) {
    auto lines = detail::tokenize_lines(in);
    std::vector<std::string> toks;
    for (auto& l : lines)
        for (auto& t : l) toks.push_back(std::move(t));
    if (toks.empty())
        throw std::invalid_argument("matrix file is empty");
    const double nv = detail::parse_number(toks[0]);
    const int n = static_cast<int>(nv);
    if (n < 1 || nv != n)
        throw std::invalid_argument("matrix file must start with a positive integer n");
    if (toks.size() != 1 + static_cast<size_t>(n) * n)
        throw std::invalid_argument("matrix file has the wrong number of entries");
    std::vector<std::vector<double>> m(n, std::vector<double>(n));
    size_t idx = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = detail::parse_number(toks[idx++]);
    return MetricInstance::from_matrix(m);
}

}  // namespace radsum
