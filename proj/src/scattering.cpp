#include "epfano/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "epfano/constants.hpp"
#include "epfano/io.hpp"

namespace epfano {

Mat2 PoleDecomposition::green(cplx e) const
{
    const Mat2 id = Mat2::identity();
    if (kind == PoleKind::TwoSimplePoles) return r1 * (1.0 / (e - lambda1)) + r2 * (1.0 / (e - lambda2));
    const cplx d = 1.0 / (e - omega_ep);
    return id * d + n * (d * d);
}

double PoleDecomposition::pole_distance(cplx e) const
{
    if (kind == PoleKind::EpDoublePole) return std::abs(e - omega_ep);
    return std::min(std::abs(e - lambda1), std::abs(e - lambda2));
}

PoleDecomposition greens_decomposition(const Mat2& h)
{
    const Eigen2 eig = eigen_2x2(h);
    PoleDecomposition out;
    if (std::abs(eig.lambda1 - eig.lambda2) <= constants::kEpBranchSwitch) {
        out.kind = PoleKind::EpDoublePole;
        out.omega_ep = 0.5 * h.trace();
        out.n = h - out.omega_ep * Mat2::identity();
        return out;
    }
    out.kind = PoleKind::TwoSimplePoles;
    out.lambda1 = eig.lambda1;
    out.lambda2 = eig.lambda2;
    if (out.lambda1.real() > out.lambda2.real()) std::swap(out.lambda1, out.lambda2);
    const Mat2 id = Mat2::identity();
    out.r1 = (h - out.lambda2 * id) * (1.0 / (out.lambda1 - out.lambda2));
    out.r2 = (h - out.lambda1 * id) * (1.0 / (out.lambda2 - out.lambda1));
    out.omega_ep = 0.5 * (out.lambda1 + out.lambda2);
    return out;
}

PoleDecomposition greens_decomposition(const EffectiveModel& model, double f)
{
    return greens_decomposition(model.at(f));
}

PoleTerms pole_terms(const EffectiveModel& model, double f, cplx e)
{
    const PoleDecomposition pd = greens_decomposition(model, f);
    if (pd.pole_distance(e) <= constants::kPoleGuard) throw SingularityError("energy lies on a pole of G");
    const Mat2& v = model.v;
    PoleTerms t;
    t.background = v;
    if (pd.kind == PoleKind::TwoSimplePoles) {
        t.pole1 = v * pd.r1 * v * (1.0 / (e - pd.lambda1));
        t.pole2 = v * pd.r2 * v * (1.0 / (e - pd.lambda2));
    } else {
        const cplx d = 1.0 / (e - pd.omega_ep);
        t.pole1 = v * v * d;
        t.pole2 = v * pd.n * v * (d * d);
    }
    return t;
}

Mat2 t_matrix(const EffectiveModel& model, double f, cplx e)
{
    const PoleTerms t = pole_terms(model, f, e);
    return t.background + t.pole1 + t.pole2;
}

std::vector<CrossSectionSample> cross_section_scan(const EffectiveModel& model, double f, double e_min, double e_max,
                                                   int n_points, const ScanOptions& opts)
{
    if (!(e_min < e_max)) throw ParameterError("cross-section scan needs e_min < e_max");
    if (n_points < 2) throw ParameterError("cross-section scan needs at least 2 points");
    if (!std::isfinite(opts.scale)) throw ParameterError("scale must be finite");

    const PoleDecomposition pd = greens_decomposition(model, f);
    const double s2 = opts.scale * opts.scale;
    std::vector<CrossSectionSample> out(static_cast<std::size_t>(n_points));
    for (int k = 0; k < n_points; ++k) {
        CrossSectionSample& s = out[static_cast<std::size_t>(k)];
        s.e = e_min + (e_max - e_min) * k / static_cast<double>(n_points - 1);
        s.background_included = opts.include_background;
        if (pd.pole_distance(s.e) <= constants::kPoleGuard) {
            s.valid = false;
            continue;
        }
        const PoleTerms t = pole_terms(model, f, s.e);
        Mat2 total = t.pole1 + t.pole2;
        if (opts.include_background) total += t.background;
        const cplx a = t.pole1(1, 1);
        const cplx b = t.pole2(1, 1);
        s.t11_sq = s2 * std::norm(total(0, 0));
        s.t22_sq = s2 * std::norm(total(1, 1));
        s.pole1_22_sq = s2 * std::norm(a);
        s.pole2_22_sq = s2 * std::norm(b);
        s.interference_22 = s2 * 2.0 * std::real(b * std::conj(a));
    }
    return out;
}

Extrema find_extrema(const std::vector<double>& x, const std::vector<double>& y, const std::vector<bool>& valid)
{
    if (x.size() != y.size() || (!valid.empty() && valid.size() != x.size()))
        throw ParameterError("extrema input sizes differ");
    if (x.size() < 3) throw ParameterError("extrema need at least 3 samples");
    auto ok = [&](std::size_t i) { return valid.empty() || valid[i]; };

    // Vertex of the parabola through three consecutive samples.
    auto refine = [&](std::size_t i) {
        const double h = x[i + 1] - x[i];
        const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
        const double curv = y0 - 2.0 * y1 + y2;
        if (curv == 0.0) return Extremum{x[i], y1, false};
        const double shift = 0.5 * h * (y0 - y2) / curv;
        const double value = y1 - (y0 - y2) * (y0 - y2) / (8.0 * curv);
        return Extremum{x[i] + shift, value, false};
    };

    Extrema out;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        if (!ok(i - 1) || !ok(i) || !ok(i + 1)) continue;
        // Plateaus count once: strict on the left, non-strict on the right.
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) out.peaks.push_back(refine(i));
        if (y[i] < y[i - 1] && y[i] <= y[i + 1]) {
            Extremum m = refine(i);
            // Never above the sample, and a nonnegative quantity stays nonnegative.
            m.value = std::min(m.value, y[i]);
            if (y[i - 1] >= 0.0 && y[i] >= 0.0 && y[i + 1] >= 0.0) m.value = std::max(m.value, 0.0);
            out.minima.push_back(m);
        }
    }
    double top = 0.0;
    for (const auto& p : out.peaks) top = std::max(top, p.value);
    for (auto& m : out.minima) m.touches_zero = top > 0.0 && std::abs(m.value) < constants::kTouchesZero * top;
    return out;
}

Extrema find_extrema(const std::vector<CrossSectionSample>& samples)
{
    std::vector<double> x, y;
    std::vector<bool> valid;
    x.reserve(samples.size());
    y.reserve(samples.size());
    valid.reserve(samples.size());
    for (const auto& s : samples) {
        x.push_back(s.e);
        y.push_back(s.t22_sq);
        valid.push_back(s.valid);
    }
    return find_extrema(x, y, valid);
}

std::string cross_section_csv(const std::vector<CrossSectionSample>& samples)
{
    std::string out = "e,t11_sq,t22_sq,pole1_22_sq,pole2_22_sq,interference_22,valid\n";
    for (const auto& s : samples) {
        for (const double v : {s.e, s.t11_sq, s.t22_sq, s.pole1_22_sq, s.pole2_22_sq, s.interference_22}) {
            out += format_number(v);
            out += ',';
        }
        out += s.valid ? "1\n" : "0\n";
    }
    return out;
}

}  // namespace epfano
