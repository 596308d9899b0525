#include "mobsig/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "mobsig/rng.hpp"

namespace mobsig {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

ScalarImage::ScalarImage(std::size_t m, std::vector<double> data) : m_(m), data_(std::move(data)) {
    if (m_ < 9) throw std::invalid_argument("ScalarImage: grid too small");
    if (data_.size() != m_ * m_) throw std::invalid_argument("ScalarImage: size mismatch");
}

ScalarImage ScalarImage::from_function(const std::function<double(double, double)>& f,
                                       std::size_t m) {
    std::vector<double> data(m * m);
    const double h = 2.0 / static_cast<double>(m - 1);
    for (std::size_t iy = 0; iy < m; ++iy)
        for (std::size_t ix = 0; ix < m; ++ix)
            data[iy * m + ix] = f(-1.0 + h * static_cast<double>(ix),
                                  -1.0 + h * static_cast<double>(iy));
    return {m, std::move(data)};
}

double MaskedField::interpolate(double x, double y, double h) const {
    const double u = (x + 1.0) / h;
    const double v = (y + 1.0) / h;
    const double fu = std::floor(u), fv = std::floor(v);
    if (fu < 0 || fv < 0) return kNan;
    const auto i = static_cast<std::size_t>(fu);
    const auto j = static_cast<std::size_t>(fv);
    if (i + 1 >= m || j + 1 >= m) return kNan;
    if (!is_valid(i, j) || !is_valid(i + 1, j) || !is_valid(i, j + 1) || !is_valid(i + 1, j + 1))
        return kNan;
    const double a = u - fu, b = v - fv;
    return at(i, j) * (1 - a) * (1 - b) + at(i + 1, j) * a * (1 - b) +
           at(i, j + 1) * (1 - a) * b + at(i + 1, j + 1) * a * b;
}

double test_image_function(double x, double y) {
    const double w = y - 0.2 * x - 0.8 * x * x;
    return std::exp(-4.0 * x * x - 8.0 * w * w);
}

ScalarImage test_image(std::size_t m) {
    if (m % 2 == 0) throw std::invalid_argument("test_image: m must be odd");
    return ScalarImage::from_function(&test_image_function, m);
}

MoebiusTransform image_demo_transform() {
    return {Complex(0.9, 0.1), Complex(0.1, 0.0), Complex(0.1, 0.4), Complex(1.0, 0.0)};
}

ScalarImage pullback(const std::function<double(double, double)>& f, const MoebiusTransform& t,
                     std::size_t m) {
    const MoebiusTransform inv = t.inverse();
    const double h = 2.0 / static_cast<double>(m - 1);
    if (std::abs(inv.c()) > 0.0) {
        const Complex pole = -inv.d() / inv.c();
        const double dx = std::max(std::abs(pole.real()) - 1.0, 0.0);
        const double dy = std::max(std::abs(pole.imag()) - 1.0, 0.0);
        if (std::hypot(dx, dy) < 2.0 * h)
            throw PoleInDomain("pullback: inverse transform has a pole near the grid");
    }
    return ScalarImage::from_function(
        [&](double x, double y) {
            const Complex w = apply(inv, Complex(x, y));
            return f(w.real(), w.imag());
        },
        m);
}

namespace {

struct Grid {
    std::size_t m;
    std::vector<double> v;
    double at(std::size_t ix, std::size_t iy) const { return v[iy * m + ix]; }
    double& at(std::size_t ix, std::size_t iy) { return v[iy * m + ix]; }
};

Grid make_grid(std::size_t m) { return Grid{m, std::vector<double>(m * m, kNan)}; }

Grid ddx(const Grid& a, double h) {
    Grid out = make_grid(a.m);
    for (std::size_t iy = 0; iy < a.m; ++iy)
        for (std::size_t ix = 1; ix + 1 < a.m; ++ix)
            out.at(ix, iy) = (a.at(ix + 1, iy) - a.at(ix - 1, iy)) / (2.0 * h);
    return out;
}

Grid ddy(const Grid& a, double h) {
    Grid out = make_grid(a.m);
    for (std::size_t iy = 1; iy + 1 < a.m; ++iy)
        for (std::size_t ix = 0; ix < a.m; ++ix)
            out.at(ix, iy) = (a.at(ix, iy + 1) - a.at(ix, iy - 1)) / (2.0 * h);
    return out;
}

MaskedField to_masked(Grid g) {
    MaskedField f;
    f.m = g.m;
    f.valid.resize(g.v.size());
    for (std::size_t i = 0; i < g.v.size(); ++i) f.valid[i] = std::isfinite(g.v[i]) ? 1 : 0;
    f.values = std::move(g.v);
    return f;
}

}  // namespace

InvariantFields invariant_fields(const ScalarImage& img, double eps_grad_rel) {
    const std::size_t m = img.m();
    const double h = img.h();
    Grid f{m, img.data()};

    Grid fx = ddx(f, h), fy = ddy(f, h);
    Grid g = make_grid(m);
    double gmax = 0.0;
    for (std::size_t i = 0; i < g.v.size(); ++i) {
        g.v[i] = std::hypot(fx.v[i], fy.v[i]);
        if (std::isfinite(g.v[i])) gmax = std::max(gmax, g.v[i]);
    }
    const double eps = eps_grad_rel * gmax;

    Grid nx = make_grid(m), ny = make_grid(m);
    for (std::size_t i = 0; i < g.v.size(); ++i) {
        if (std::isfinite(g.v[i]) && g.v[i] >= eps) {
            nx.v[i] = fx.v[i] / g.v[i];
            ny.v[i] = fy.v[i] / g.v[i];
        }
    }

    Grid divn = make_grid(m), curln = make_grid(m);
    {
        Grid nxx = ddx(nx, h), nyy = ddy(ny, h), nyx = ddx(ny, h), nxy = ddy(nx, h);
        for (std::size_t i = 0; i < divn.v.size(); ++i) {
            divn.v[i] = nxx.v[i] + nyy.v[i];
            curln.v[i] = nyx.v[i] - nxy.v[i];
        }
    }

    Grid cx = ddx(curln, h), cy = ddy(curln, h);
    Grid dx_ = ddx(divn, h), dy_ = ddy(divn, h);
    Grid lam_n = make_grid(m), lam_t = make_grid(m);
    for (std::size_t i = 0; i < lam_n.v.size(); ++i) {
        const double g2 = g.v[i] * g.v[i];
        // Sign convention chosen to match the reported saddle values of the
        // reference experiment; both fields flip together under a y-axis flip.
        lam_n.v[i] = -(nx.v[i] * cx.v[i] + ny.v[i] * cy.v[i]) / g2;
        lam_t.v[i] = -(nx.v[i] * dy_.v[i] - ny.v[i] * dx_.v[i]) / g2;
    }

    InvariantFields out;
    out.lambda_n = to_masked(std::move(lam_n));
    out.lambda_t = to_masked(std::move(lam_t));
    Grid gmask = make_grid(m);
    for (std::size_t i = 0; i < g.v.size(); ++i)
        gmask.v[i] = (std::isfinite(g.v[i]) && g.v[i] >= eps) ? g.v[i] : kNan;
    out.grad_norm = to_masked(std::move(gmask));
    out.div_n = to_masked(std::move(divn));
    return out;
}

namespace {

// Level-set extraction on the 4-triangle subdivision of each cell (the
// centre value is the corner average).  This realises the cell-centre rule
// for saddle cells and keeps every contour point a linear edge interpolation.
struct SegmentRec {
    std::size_t start_key, end_key;
    std::array<double, 2> p0, p1;
};

}  // namespace

std::vector<Polyline> level_set(const ScalarImage& img, double level) {
    const std::size_t m = img.m();
    const double h = img.h();
    const std::size_t base = m * m;

    std::vector<SegmentRec> segs;
    auto emit_triangle = [&](const std::array<double, 2>& pa, double va, std::size_t ka,
                             const std::array<double, 2>& pb, double vb, std::size_t kb,
                             const std::array<double, 2>& pc, double vc, std::size_t kc) {
        // Vertices in ccw order; edge keys ka=(a,b), kb=(b,c), kc=(c,a).
        const bool ia = va >= level, ib = vb >= level, ic = vc >= level;
        if (ia == ib && ib == ic) return;
        auto crossing = [&](const std::array<double, 2>& p, double vp,
                            const std::array<double, 2>& q, double vq) {
            const double s = (level - vp) / (vq - vp);
            return std::array<double, 2>{p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])};
        };
        // The directed contour starts on the in->out edge and ends on the
        // out->in edge; the >= level side stays on the left.
        std::array<double, 2> start{}, end{};
        std::size_t skey = 0, ekey = 0;
        const bool edges_in[3] = {ia, ib, ic};
        const bool edges_out[3] = {ib, ic, ia};
        const std::array<double, 2>* pts[3] = {&pa, &pb, &pc};
        const double vals[3] = {va, vb, vc};
        const std::size_t keys[3] = {ka, kb, kc};
        for (int e = 0; e < 3; ++e) {
            const int enext = (e + 1) % 3;
            if (edges_in[e] && !edges_out[e]) {
                start = crossing(*pts[e], vals[e], *pts[enext], vals[enext]);
                skey = keys[e];
            } else if (!edges_in[e] && edges_out[e]) {
                end = crossing(*pts[e], vals[e], *pts[enext], vals[enext]);
                ekey = keys[e];
            }
        }
        segs.push_back({skey, ekey, start, end});
    };

    for (std::size_t iy = 0; iy + 1 < m; ++iy) {
        for (std::size_t ix = 0; ix + 1 < m; ++ix) {
            const double v00 = img.value(ix, iy), v10 = img.value(ix + 1, iy);
            const double v11 = img.value(ix + 1, iy + 1), v01 = img.value(ix, iy + 1);
            const bool b00 = v00 >= level, b10 = v10 >= level, b11 = v11 >= level,
                       b01 = v01 >= level;
            if (b00 == b10 && b10 == b11 && b11 == b01) continue;

            const double x0 = img.x(ix), y0 = img.y(iy);
            const std::array<double, 2> p00{x0, y0}, p10{x0 + h, y0}, p11{x0 + h, y0 + h},
                p01{x0, y0 + h};
            const std::array<double, 2> pc{x0 + 0.5 * h, y0 + 0.5 * h};
            const double vc = 0.25 * (v00 + v10 + v11 + v01);

            const std::size_t node = iy * m + ix;
            const std::size_t kb = 0 * base + node;            // bottom grid edge
            const std::size_t kt = 0 * base + (iy + 1) * m + ix;  // top
            const std::size_t kl = 1 * base + node;            // left
            const std::size_t kr = 1 * base + iy * m + (ix + 1);  // right
            const std::size_t k00 = 2 * base + node;  // centre-corner diagonals
            const std::size_t k10 = 3 * base + node;
            const std::size_t k11 = 4 * base + node;
            const std::size_t k01 = 5 * base + node;

            // Four ccw triangles around the centre.
            emit_triangle(p00, v00, kb, p10, v10, k10, pc, vc, k00);
            emit_triangle(p10, v10, kr, p11, v11, k11, pc, vc, k10);
            emit_triangle(p11, v11, kt, p01, v01, k01, pc, vc, k11);
            emit_triangle(p01, v01, kl, p00, v00, k00, pc, vc, k01);
        }
    }

    std::map<std::size_t, std::size_t> by_start, by_end;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        by_start[segs[i].start_key] = i;
        by_end[segs[i].end_key] = i;
    }

    std::vector<Polyline> out;
    std::vector<bool> used(segs.size(), false);
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (used[i]) continue;
        // Walk backward to the chain head; a full cycle means a closed loop.
        std::size_t head = i;
        for (std::size_t steps = 0; steps < segs.size(); ++steps) {
            auto it = by_end.find(segs[head].start_key);
            if (it == by_end.end() || used[it->second]) break;
            if (it->second == i) {
                head = i;
                break;
            }
            head = it->second;
        }

        Polyline pl;
        pl.points.push_back(segs[head].p0);
        std::size_t cur = head;
        for (;;) {
            used[cur] = true;
            pl.points.push_back(segs[cur].p1);
            auto it = by_start.find(segs[cur].end_key);
            if (it == by_start.end() || used[it->second]) break;
            cur = it->second;
        }
        if (pl.points.size() >= 3 &&
            std::hypot(pl.points.front()[0] - pl.points.back()[0],
                       pl.points.front()[1] - pl.points.back()[1]) < 1e-12) {
            pl.points.pop_back();
            pl.closed = true;
        }
        out.push_back(std::move(pl));
    }
    return out;
}

SignatureCurve signature_curve(const ScalarImage& img, const InvariantFields& fields,
                               double level) {
    const auto contours = level_set(img, level);
    if (contours.empty()) throw EmptyLevelSet("signature_curve: empty level set");
    SignatureCurve sc;
    sc.level = level;
    const double h = img.h();
    for (const Polyline& pl : contours) {
        for (const auto& p : pl.points) {
            const double ln = fields.lambda_n.interpolate(p[0], p[1], h);
            const double lt = fields.lambda_t.interpolate(p[0], p[1], h);
            if (!std::isfinite(ln) || !std::isfinite(lt)) continue;
            SignaturePoint sp;
            sp.x = p[0];
            sp.y = p[1];
            sp.lambda_n = ln;
            sp.lambda_t = lt;
            sp.u = std::atan(lt / 4.0);
            sp.v = std::atan(ln / 4.0);
            sc.points.push_back(sp);
        }
    }
    return sc;
}

SignatureCurve signature_curve(const ScalarImage& img, double level, double eps_grad_rel) {
    return signature_curve(img, invariant_fields(img, eps_grad_rel), level);
}

double signature_distance(const SignatureCurve& a, const SignatureCurve& b) {
    if (a.points.empty() || b.points.empty())
        throw EmptyLevelSet("signature_distance: empty signature curve");
    auto mean_nn = [](const SignatureCurve& p, const SignatureCurve& q) {
        double sum = 0.0;
        for (const auto& sp : p.points) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& sq : q.points)
                best = std::min(best, std::hypot(sp.u - sq.u, sp.v - sq.v));
            sum += best;
        }
        return sum / static_cast<double>(p.points.size());
    };
    return 0.5 * (mean_nn(a, b) + mean_nn(b, a));
}

BlobImage::BlobImage(std::vector<GaussianBlob> blobs, std::size_t grid_m)
    : blobs_(std::move(blobs)), grid_m_(grid_m) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    const double h = 2.0 / static_cast<double>(grid_m_ - 1);
    for (std::size_t iy = 0; iy < grid_m_; ++iy) {
        for (std::size_t ix = 0; ix < grid_m_; ++ix) {
            const double v = raw(-1.0 + h * static_cast<double>(ix),
                                 -1.0 + h * static_cast<double>(iy));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    lo_ = lo;
    hi_ = hi > lo ? hi : lo + 1.0;
}

double BlobImage::raw(double x, double y) const {
    double s = 0.0;
    for (const auto& b : blobs_) {
        const double dx = x - b.cx, dy = y - b.cy;
        s += b.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * b.sigma * b.sigma));
    }
    return s;
}

double BlobImage::operator()(double x, double y) const {
    return (raw(x, y) - lo_) / (hi_ - lo_);
}

BlobImage BlobImage::jittered(double rel, std::uint64_t seed) const {
    Rng rng(seed);
    std::vector<GaussianBlob> out = blobs_;
    for (auto& b : out) {
        b.cx *= rng.uniform(1.0 - rel, 1.0 + rel);
        b.cy *= rng.uniform(1.0 - rel, 1.0 + rel);
        b.sigma *= rng.uniform(1.0 - rel, 1.0 + rel);
        b.amplitude *= rng.uniform(1.0 - rel, 1.0 + rel);
    }
    return {std::move(out), grid_m_};
}

BlobImage random_blobs(std::size_t k, std::uint64_t seed, std::size_t grid_m) {
    if (k < 1) throw std::invalid_argument("random_blobs: k must be positive");
    Rng rng(seed);
    std::vector<GaussianBlob> blobs;
    blobs.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        GaussianBlob b;
        b.cx = rng.uniform(-0.5, 0.5);
        b.cy = rng.uniform(-0.5, 0.5);
        b.sigma = rng.uniform(0.15, 0.4);
        b.amplitude = rng.uniform(0.5, 1.0);
        blobs.push_back(b);
    }
    return {std::move(blobs), grid_m};
}

namespace {

bool pole_clear_of_grid(const MoebiusTransform& t, std::size_t grid_m) {
    const MoebiusTransform inv = t.inverse();
    if (std::abs(inv.c()) == 0.0) return true;
    const Complex pole = -inv.d() / inv.c();
    const double h = 2.0 / static_cast<double>(grid_m - 1);
    const double dx = std::max(std::abs(pole.real()) - 1.0, 0.0);
    const double dy = std::max(std::abs(pole.imag()) - 1.0, 0.0);
    return std::hypot(dx, dy) >= 2.0 * h;
}

}  // namespace

MoebiusTransform random_blob_transform(std::uint64_t seed, std::size_t grid_m) {
    Rng rng(seed);
    for (int tries = 0; tries < 100; ++tries) {
        const double ra = std::sqrt(rng.uniform(0.7 * 0.7, 1.3 * 1.3));
        const double ta = rng.uniform(0.0, 2.0 * M_PI);
        const double tc = rng.uniform(0.0, 2.0 * M_PI);
        const double mc = std::abs(rng.normal(0.0, 0.6));
        const Complex a = ra * Complex(std::cos(ta), std::sin(ta));
        const Complex c = mc * Complex(std::cos(tc), std::sin(tc));
        MoebiusTransform t(a, 0.0, c, 1.0);
        if (pole_clear_of_grid(t, grid_m)) return t;
    }
    throw std::runtime_error("random_blob_transform: rejection sampling failed");
}

MoebiusTransform random_small_transform(std::uint64_t seed, std::size_t grid_m) {
    Rng rng(seed);
    for (int tries = 0; tries < 100; ++tries) {
        const Complex c(rng.normal(0.0, 0.1), rng.normal(0.0, 0.1));
        if (std::abs(c) < 1e-8) continue;
        MoebiusTransform t = MoebiusTransform::unipotent(c);
        if (pole_clear_of_grid(t, grid_m)) return t;
    }
    throw std::runtime_error("random_small_transform: rejection sampling failed");
}

SaddlePoint find_saddle(const MaskedField& field, double h, double cx, double cy,
                        double half_width) {
    const std::size_t m = field.m;
    Grid f{m, field.values};
    Grid gx = ddx(f, h), gy = ddy(f, h);
    Grid gn = make_grid(m);
    for (std::size_t i = 0; i < gn.v.size(); ++i) gn.v[i] = std::hypot(gx.v[i], gy.v[i]);
    Grid gxx = ddx(gx, h), gyy = ddy(gy, h), gxy = ddy(gx, h);

    SaddlePoint best;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t iy = 2; iy + 2 < m; ++iy) {
        for (std::size_t ix = 2; ix + 2 < m; ++ix) {
            const double x = -1.0 + h * static_cast<double>(ix);
            const double y = -1.0 + h * static_cast<double>(iy);
            if (std::abs(x - cx) > half_width || std::abs(y - cy) > half_width) continue;
            const double det =
                gxx.at(ix, iy) * gyy.at(ix, iy) - gxy.at(ix, iy) * gxy.at(ix, iy);
            if (!std::isfinite(gn.at(ix, iy)) || !(det < 0.0)) continue;
            bool localmin = true;
            for (int dy2 = -1; dy2 <= 1 && localmin; ++dy2)
                for (int dx2 = -1; dx2 <= 1 && localmin; ++dx2) {
                    const double nb = gn.at(ix + static_cast<std::size_t>(dx2),
                                            iy + static_cast<std::size_t>(dy2));
                    if (!std::isfinite(nb) || nb < gn.at(ix, iy)) localmin = false;
                }
            if (!localmin) continue;
            const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
            if (d2 < best_d2) {
                best_d2 = d2;
                best.x = x;
                best.y = y;
                best.value = field.at(ix, iy);
                best.found = true;
            }
        }
    }
    return best;
}

void write_pgm(const ScalarImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
    const std::size_t m = img.m();
    out << "P2\n" << m << ' ' << m << "\n65535\n";
    for (std::size_t iy = 0; iy < m; ++iy) {
        for (std::size_t ix = 0; ix < m; ++ix) {
            const double v = std::clamp(img.value(ix, iy), 0.0, 1.0);
            out << static_cast<long>(std::lround(v * 65535.0)) << (ix + 1 == m ? '\n' : ' ');
        }
    }
    if (!out) throw std::runtime_error("write_pgm: write failed for " + path);
}

ScalarImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_pgm: cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P2") throw std::runtime_error("read_pgm: expected plain-text P2");
    std::size_t w = 0, hgt = 0;
    long maxval = 0;
    in >> w >> hgt >> maxval;
    if (w != hgt || w < 9 || maxval <= 0) throw std::runtime_error("read_pgm: bad header");
    std::vector<double> data(w * hgt);
    for (double& v : data) {
        long raw = 0;
        if (!(in >> raw)) throw std::runtime_error("read_pgm: truncated data");
        v = static_cast<double>(raw) / static_cast<double>(maxval);
    }
    return {w, std::move(data)};
}

void write_image_csv(const ScalarImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_image_csv: cannot open " + path);
    const std::size_t m = img.m();
    char buf[40];
    for (std::size_t iy = 0; iy < m; ++iy) {
        for (std::size_t ix = 0; ix < m; ++ix) {
            std::snprintf(buf, sizeof(buf), "%.17g", img.value(ix, iy));
            out << buf << (ix + 1 == m ? '\n' : ',');
        }
    }
}

ScalarImage read_image_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_image_csv: cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    const std::size_t m = rows.size();
    std::vector<double> data;
    data.reserve(m * m);
    for (const auto& row : rows) {
        if (row.size() != m) throw std::runtime_error("read_image_csv: ragged rows");
        data.insert(data.end(), row.begin(), row.end());
    }
    return {m, std::move(data)};
}

void write_signature_csv(const std::vector<SignatureCurve>& curves, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_signature_csv: cannot open " + path);
    out << "level,x,y,lambda_n,lambda_t,sig_u,sig_v\n";
    char buf[200];
    for (const auto& sc : curves) {
        for (const auto& p : sc.points) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          sc.level, p.x, p.y, p.lambda_n, p.lambda_t, p.u, p.v);
            out << buf;
        }
    }
}

}  // namespace mobsig
