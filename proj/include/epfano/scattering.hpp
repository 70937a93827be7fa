#pragma once

// Resolvent of the effective model in pole form, the T-matrix
// T(E) = v + v G(E) v, its pole-term split, and real-energy scans.

#include <string>
#include <vector>

#include "epfano/reduction.hpp"

namespace epfano {

enum class PoleKind { TwoSimplePoles, EpDoublePole };

struct PoleDecomposition {
    PoleKind kind = PoleKind::TwoSimplePoles;
    // two simple poles, Re lambda1 <= Re lambda2
    cplx lambda1;
    cplx lambda2;
    Mat2 r1;
    Mat2 r2;
    // double pole: G = I / (E - omega_ep) + n / (E - omega_ep)^2
    cplx omega_ep;
    Mat2 n;

    /// G(E) assembled from the poles.
    Mat2 green(cplx e) const;
    /// Distance from e to the nearest pole.
    double pole_distance(cplx e) const;
};

/// Simple poles with spectral projectors r_i = (h - lambda_j) / (lambda_i - lambda_j)
/// when the eigenvalues are more than 1e-6 apart, the double-pole form otherwise.
PoleDecomposition greens_decomposition(const Mat2& h);
PoleDecomposition greens_decomposition(const EffectiveModel& model, double f);

struct PoleTerms {
    Mat2 pole1;       ///< v r1 v / (e - lambda1), or the first-order term at the EP
    Mat2 pole2;       ///< v r2 v / (e - lambda2), or v n v / (e - omega)^2 at the EP
    Mat2 background;  ///< v
};

/// Throws SingularityError when e is within 1e-12 of a pole.
PoleTerms pole_terms(const EffectiveModel& model, double f, cplx e);
Mat2 t_matrix(const EffectiveModel& model, double f, cplx e);

struct CrossSectionSample {
    double e = 0.0;
    double t11_sq = 0.0;
    double t22_sq = 0.0;
    double pole1_22_sq = 0.0;
    double pole2_22_sq = 0.0;
    double interference_22 = 0.0;  ///< 2 Re[T2_22 conj(T1_22)]
    bool background_included = false;
    bool valid = true;
};

struct ScanOptions {
    // Off by default: the pole sum alone carries the interference zero.
    bool include_background = false;
    double scale = 1.0;  ///< overall real factor on T
};

/// Uniform grid of n_points energies in [e_min, e_max]. Points on a real pole
/// are marked invalid instead of failing.
std::vector<CrossSectionSample> cross_section_scan(const EffectiveModel& model, double f, double e_min, double e_max,
                                                   int n_points, const ScanOptions& opts = {});

struct Extremum {
    double e = 0.0;
    double value = 0.0;
    bool touches_zero = false;  ///< minima only: value < 1e-9 * largest peak
};

struct Extrema {
    std::vector<Extremum> peaks;
    std::vector<Extremum> minima;
};

/// Interior local extrema of t22_sq, refined by a parabola through the
/// neighbouring samples. Invalid samples split the data into segments.
Extrema find_extrema(const std::vector<CrossSectionSample>& samples);
Extrema find_extrema(const std::vector<double>& x, const std::vector<double>& y, const std::vector<bool>& valid = {});

std::string cross_section_csv(const std::vector<CrossSectionSample>& samples);

}  // namespace epfano
