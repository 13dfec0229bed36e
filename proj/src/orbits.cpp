#include "modsurf/orbits.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <set>
#include <thread>

namespace modsurf {

namespace {

constexpr Mat64 kIdentity{1, 0, 0, 1};

Mat64 append_digit(const Mat64& m, uint32_t g) {
    return {m.a * g + m.b, m.a, m.c * g + m.d, m.c};
}

void validate_query(uint32_t A, uint64_t X) {
    if (A < 1) throw Error("bad_argument", "alphabet bound must be >= 1");
    if (X < 1) throw Error("bad_argument", "ball radius must be >= 1");
    if (X > (uint64_t(1) << 62) / (A + 1))
        throw Error("bad_argument", "ball radius too large for 64-bit norms");
}

unsigned resolve_workers(unsigned workers) {
    if (workers) return workers;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

}  // namespace

IntMatrix2 to_int_matrix(const Mat64& m) {
    auto z = [](uint64_t v) { return mpz_class(static_cast<unsigned long>(v)); };
    return {z(m.a), z(m.b), z(m.c), z(m.d)};
}

void enumerate(const OrbitQuery& q, const std::function<void(const Mat64&, const Word&)>& fn) {
    validate_query(q.A, q.X);
    Word word;
    // Norm = top-left entry, nondecreasing along the tree: prune exactly.
    auto dfs = [&](auto&& self, const Mat64& m) -> void {
        if (!word.empty() && word.size() % 2 == 0) fn(m, word);
        for (uint32_t g = 1; g <= q.A; ++g) {
            Mat64 next = append_digit(m, g);
            if (next.a > q.X) continue;
            word.push_back(g);
            self(self, next);
            word.pop_back();
        }
    };
    dfs(dfs, kIdentity);
}

namespace {

// Count even-depth descendants per norm bin.  bins are grid upper bounds.
void count_dfs(const Mat64& m, bool even_depth, uint32_t A, const std::vector<uint64_t>& grid,
               std::vector<uint64_t>& bins) {
    for (uint32_t g = 1; g <= A; ++g) {
        Mat64 next = append_digit(m, g);
        if (next.a > grid.back()) continue;
        if (!even_depth) {
            std::size_t idx =
                std::lower_bound(grid.begin(), grid.end(), next.a) - grid.begin();
            ++bins[idx];
        }
        count_dfs(next, !even_depth, A, grid, bins);
    }
}

}  // namespace

std::vector<uint64_t> ball_counts(uint32_t A, const std::vector<uint64_t>& grid,
                                  unsigned workers) {
    if (grid.empty() || !std::is_sorted(grid.begin(), grid.end()))
        throw Error("bad_argument", "grid must be ascending and nonempty");
    validate_query(A, grid.back());
    workers = resolve_workers(workers);

    // Split the tree at a fixed even depth; the prefix is counted serially
    // and the frontier subtrees are distributed to the workers.
    unsigned split = A >= 3 ? 4 : 6;
    std::vector<uint64_t> bins(grid.size(), 0);
    std::vector<Mat64> frontier;
    Word word;
    auto prefix_dfs = [&](auto&& self, const Mat64& m, unsigned depth) -> void {
        if (depth && depth % 2 == 0) {
            std::size_t idx = std::lower_bound(grid.begin(), grid.end(), m.a) - grid.begin();
            ++bins[idx];
        }
        if (depth == split) {
            frontier.push_back(m);
            return;
        }
        for (uint32_t g = 1; g <= A; ++g) {
            Mat64 next = append_digit(m, g);
            if (next.a > grid.back()) continue;
            self(self, next, depth + 1);
        }
    };
    prefix_dfs(prefix_dfs, kIdentity, 0);

    std::atomic<std::size_t> cursor{0};
    std::vector<std::vector<uint64_t>> partial(workers, std::vector<uint64_t>(grid.size(), 0));
    auto work = [&](unsigned w) {
        for (;;) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= frontier.size()) return;
            count_dfs(frontier[i], true, A, grid, partial[w]);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& t : pool) t.join();

    for (auto& p : partial)
        for (std::size_t j = 0; j < grid.size(); ++j) bins[j] += p[j];
    // bins hold counts per norm interval; accumulate into ball counts.
    std::vector<uint64_t> counts(grid.size(), 0);
    uint64_t acc = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        acc += bins[j];
        counts[j] = acc;
    }
    return counts;
}

GrowthFit growth_exponent(uint32_t A, std::vector<uint64_t> grid, unsigned workers) {
    if (A < 2) throw Error("bad_argument", "growth fit needs A >= 2");
    if (grid.size() < 5 || !std::is_sorted(grid.begin(), grid.end()) ||
        std::adjacent_find(grid.begin(), grid.end()) != grid.end())
        throw Error("bad_grid", "need at least 5 strictly increasing grid points");
    std::vector<uint64_t> counts = ball_counts(A, grid, workers);
    for (uint64_t c : counts)
        if (c == 0) throw Error("bad_grid", "grid point below the smallest element norm");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        double x = std::log(static_cast<double>(grid[i]));
        double y = std::log(static_cast<double>(counts[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, std::move(grid), std::move(counts)};
}

LinearFunctional::LinearFunctional(int64_t al, int64_t be, int64_t ga, int64_t de)
    : alpha(al), beta(be), gamma(ga), delta(de) {
    if (!alpha && !beta && !gamma && !delta)
        throw Error("bad_argument", "functional must not vanish identically");
}

int64_t LinearFunctional::eval(const Mat64& m) const {
    __int128 v = static_cast<__int128>(alpha) * m.a + static_cast<__int128>(beta) * m.b +
                 static_cast<__int128>(gamma) * m.c + static_cast<__int128>(delta) * m.d;
    if (v > INT64_MAX || v < INT64_MIN)
        throw Error("overflow", "functional value exceeds 64 bits");
    return static_cast<int64_t>(v);
}

MultiplicityReport multiplicity(const OrbitQuery& q, const LinearFunctional& F, int64_t n,
                                bool keep_witnesses, uint32_t q_bound) {
    validate_query(q.A, q.X);
    MultiplicityReport rep{n, 0, q.X, admissible(q.A, F, n, q_bound), {}};
    // For the top-left functional the target value is the norm itself, so
    // the prune can be tightened from X to n.
    uint64_t limit = q.X;
    if (F.is_top_left()) {
        if (n < 2 || static_cast<uint64_t>(n) > q.X) return rep;
        limit = static_cast<uint64_t>(n);
    }
    Word word;
    auto dfs = [&](auto&& self, const Mat64& m) -> void {
        if (!word.empty() && word.size() % 2 == 0 && F.eval(m) == n) {
            ++rep.count;
            if (keep_witnesses) rep.witnesses.push_back(word);
        }
        for (uint32_t g = 1; g <= q.A; ++g) {
            Mat64 next = append_digit(m, g);
            if (next.a > limit) continue;
            word.push_back(g);
            self(self, next);
            word.pop_back();
        }
    };
    dfs(dfs, kIdentity);
    return rep;
}

namespace {

struct ModMatrix {
    uint32_t a, b, c, d;
};

uint64_t pack_mod(const ModMatrix& m, uint64_t q) {
    return ((static_cast<uint64_t>(m.a) * q + m.b) * q + m.c) * q + m.d;
}

ModMatrix mul_mod(const ModMatrix& x, const ModMatrix& y, uint64_t q) {
    return {static_cast<uint32_t>((uint64_t(x.a) * y.a + uint64_t(x.b) * y.c) % q),
            static_cast<uint32_t>((uint64_t(x.a) * y.b + uint64_t(x.b) * y.d) % q),
            static_cast<uint32_t>((uint64_t(x.c) * y.a + uint64_t(x.d) * y.c) % q),
            static_cast<uint32_t>((uint64_t(x.c) * y.b + uint64_t(x.d) * y.d) % q)};
}

}  // namespace

bool admissible(uint32_t A, const LinearFunctional& F, int64_t n, uint32_t q_bound) {
    if (A < 2) throw Error("bad_argument", "admissibility needs A >= 2");
    if (q_bound < 1) throw Error("bad_bound", "q_bound must be >= 1");
    for (uint64_t q = 2; q <= q_bound; ++q) {
        // Distinct digit residues mod q, then distinct pair products: these
        // generate the even-length semigroup mod q.
        std::vector<uint32_t> residues;
        for (uint64_t a = 1; a <= std::min<uint64_t>(A, q); ++a)
            residues.push_back(static_cast<uint32_t>(a % q));
        std::sort(residues.begin(), residues.end());
        residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
        const uint32_t one = static_cast<uint32_t>(1 % q);
        std::vector<ModMatrix> gens;
        {
            std::set<uint64_t> seen;
            for (uint32_t a : residues)
                for (uint32_t b : residues) {
                    ModMatrix m = mul_mod({a, one, one, 0}, {b, one, one, 0}, q);
                    if (seen.insert(pack_mod(m, q)).second) gens.push_back(m);
                }
        }
        uint64_t target = ((n % static_cast<int64_t>(q)) + q) % q;
        auto fmod = [&](const ModMatrix& m) {
            int64_t v = F.alpha * int64_t(m.a) + F.beta * int64_t(m.b) +
                        F.gamma * int64_t(m.c) + F.delta * int64_t(m.d);
            return static_cast<uint64_t>(((v % static_cast<int64_t>(q)) + q) % q);
        };
        // Dense visited table for small moduli, sparse beyond.
        std::vector<uint8_t> dense;
        std::set<uint64_t> sparse;
        bool use_dense = q <= 64;
        if (use_dense) dense.assign(q * q * q * q, 0);
        auto mark = [&](uint64_t key) {
            if (use_dense) {
                if (dense[key]) return false;
                dense[key] = 1;
                return true;
            }
            return sparse.insert(key).second;
        };
        std::vector<ModMatrix> queue;
        bool found = false;
        for (const ModMatrix& g : gens) {
            if (mark(pack_mod(g, q))) {
                queue.push_back(g);
                if (fmod(g) == target) found = true;
            }
        }
        for (std::size_t head = 0; head < queue.size() && !found; ++head) {
            ModMatrix cur = queue[head];
            for (const ModMatrix& g : gens) {
                ModMatrix next = mul_mod(cur, g, q);
                if (!mark(pack_mod(next, q))) continue;
                if (fmod(next) == target) {
                    found = true;
                    break;
                }
                queue.push_back(next);
            }
        }
        if (!found) return false;
    }
    return true;
}

namespace {

// Depth-first search over digit strings with continuant pairs, digits tried
// from A down to 1.  Marks every denominator <= N it passes through.
struct ZarembaDfs {
    uint32_t A;
    uint64_t N;
    std::vector<uint8_t>* hit = nullptr;                        // scan mode
    std::vector<std::pair<uint64_t, Word>>* witnesses = nullptr;
    uint64_t target = 0;                                        // check mode
    std::optional<std::pair<uint64_t, Word>> found;
    Word word;

    // (p, q) = numerator/denominator continuants of [0; word].
    bool go(uint64_t p_prev, uint64_t p_cur, uint64_t q_prev, uint64_t q_cur) {
        for (uint32_t g = A; g >= 1; --g) {
            uint64_t p = g * p_cur + p_prev;
            uint64_t q = g * q_cur + q_prev;
            if (q > N) continue;
            word.push_back(g);
            if (p < q) {
                if (hit && !(*hit)[q]) {
                    (*hit)[q] = 1;
                    if (witnesses) (*witnesses)[q] = {p, word};
                }
                if (target && q == target) {
                    found = {{p, word}};
                    word.pop_back();
                    return true;
                }
            }
            if (go(p_cur, p, q_cur, q)) {
                word.pop_back();
                return true;
            }
            word.pop_back();
        }
        return false;
    }
};

}  // namespace

std::optional<std::pair<uint64_t, Word>> zaremba_check(uint64_t d, uint32_t A) {
    if (d < 1 || A < 1) throw Error("bad_argument", "need d >= 1 and A >= 1");
    if (d == 1) return std::make_pair(uint64_t(0), Word{});
    ZarembaDfs dfs;
    dfs.A = A;
    dfs.N = d;
    dfs.target = d;
    dfs.go(1, 0, 0, 1);
    return dfs.found;
}

ZarembaScan zaremba_scan(uint64_t N, uint32_t A, bool keep_witnesses) {
    if (N < 2 || A < 1) throw Error("bad_argument", "need N >= 2 and A >= 1");
    ZarembaDfs dfs;
    dfs.A = A;
    dfs.N = N;
    std::vector<uint8_t> hit(N + 1, 0);
    std::vector<std::pair<uint64_t, Word>> wit;
    dfs.hit = &hit;
    if (keep_witnesses) {
        wit.assign(N + 1, {0, {}});
        dfs.witnesses = &wit;
    }
    dfs.go(1, 0, 0, 1);
    hit[1] = 1;  // d = 1 holds trivially

    ZarembaScan out;
    uint64_t hits = 0;
    for (uint64_t d = 1; d <= N; ++d) {
        if (hit[d])
            ++hits;
        else
            out.exceptions.push_back(d);
    }
    out.density = static_cast<double>(hits) / static_cast<double>(N);
    out.witnesses = std::move(wit);
    return out;
}

std::vector<CohenRow> cohen_ratio(uint32_t A, uint64_t n_lo, uint64_t n_hi,
                                  std::optional<double> delta, unsigned workers) {
    if (A < 2) throw Error("bad_argument", "needs A >= 2");
    if (n_lo < 2 || n_hi < n_lo) throw Error("bad_argument", "need 2 <= n_lo <= n_hi");
    if (n_hi > 100000000) throw Error("bad_argument", "n_hi too large for the histogram");
    validate_query(A, n_hi);

    // Norm histogram of the ball of radius n_hi; norm = top-left entry, so
    // the same histogram yields both mult(n) and N(n).
    std::vector<uint64_t> hist(n_hi + 1, 0);
    auto dfs = [&](auto&& self, const Mat64& m, bool even) -> void {
        for (uint32_t g = 1; g <= A; ++g) {
            Mat64 next = append_digit(m, g);
            if (next.a > n_hi) continue;
            if (!even) ++hist[next.a];
            self(self, next, !even);
        }
    };
    dfs(dfs, kIdentity, true);

    double del;
    if (delta) {
        del = *delta;
    } else {
        std::vector<uint64_t> grid;
        uint64_t hi = std::max<uint64_t>(n_hi, 10000);
        for (int i = 0; i < 7; ++i)
            grid.push_back(static_cast<uint64_t>(
                std::llround(std::pow(10.0, 2.0 + i * (std::log10(double(hi)) - 2.0) / 6.0))));
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        del = growth_exponent(A, grid, workers).slope / 2.0;
    }

    const double pi2_6 = 1.6449340668482264;
    std::vector<CohenRow> rows;
    rows.reserve(n_hi - n_lo + 1);
    uint64_t ball = 0;
    for (uint64_t m = 1; m < n_lo; ++m) ball += hist[m];
    for (uint64_t n = n_lo; n <= n_hi; ++n) {
        ball += hist[n];
        double euler = euler_factor_product(mpz_class(static_cast<unsigned long>(n))).get_d();
        double predicted = 2.0 * del * static_cast<double>(ball) / static_cast<double>(n) *
                           pi2_6 * euler;
        rows.push_back({n, hist[n], predicted, static_cast<double>(hist[n]) / predicted});
    }
    return rows;
}

namespace {

bool is_primitive_word(const Word& w) {
    std::size_t L = w.size();
    for (std::size_t l = 1; l <= L / 2; ++l) {
        if (L % l) continue;
        bool rep = true;
        for (std::size_t j = l; j < L && rep; ++j) rep = (w[j] == w[j % l]);
        if (rep) return false;
    }
    return true;
}

bool is_bracelet_canonical(const Word& w) {
    std::size_t L = w.size();
    Word rev(w.rbegin(), w.rend());
    const Word* bases[2] = {&w, &rev};
    for (std::size_t k = 0; k < L; ++k) {
        for (const Word* base : bases) {
            if (base == &w && k == 0) continue;
            bool less = false, greater = false;
            for (std::size_t j = 0; j < L; ++j) {
                uint32_t c = (*base)[(j + k) % L];
                if (c < w[j]) {
                    less = true;
                    break;
                }
                if (c > w[j]) {
                    greater = true;
                    break;
                }
            }
            if (less) return false;
            (void)greater;
        }
    }
    return true;
}

}  // namespace

std::vector<McMullenHit> mcmullen_search(uint32_t A, const mpz_class& kernel,
                                         uint32_t max_period) {
    if (A < 1) throw Error("bad_argument", "alphabet bound must be >= 1");
    if (max_period % 2 || max_period == 0)
        throw Error("bad_length", "max_period must be a positive even integer");
    if (sgn(kernel) <= 0 || !is_squarefree(kernel))
        throw Error("bad_argument", "kernel must be positive and squarefree");
    double total = 0;
    for (uint32_t l = 1; l <= max_period; ++l) total += std::pow(double(A), double(l));
    if (total > double(1ull << 28))
        throw Error("limit_exceeded", "search space too large; lower A or max_period");

    std::vector<McMullenHit> hits;
    Word w;
    for (uint32_t L = 1; L <= max_period; ++L) {
        w.assign(L, 1);
        for (;;) {
            if (is_bracelet_canonical(w) && is_primitive_word(w)) {
                std::vector<mpz_class> digits(w.begin(), w.end());
                if (L % 2) digits.insert(digits.end(), w.begin(), w.end());
                IntMatrix2 m = cf_to_matrix(digits);
                mpz_class disc = m.trace() * m.trace() - 4;
                if (mpz_divisible_p(disc.get_mpz_t(), kernel.get_mpz_t()) &&
                    is_perfect_square(disc / kernel)) {
                    std::vector<mpz_class> period(w.begin(), w.end());
                    hits.push_back({w, cf_eval({{}, period})});
                }
            }
            // Odometer.
            std::size_t i = L;
            while (i > 0 && w[i - 1] == A) w[--i] = 1;
            if (i == 0) break;
            ++w[i - 1];
        }
    }
    return hits;
}

}  // namespace modsurf
