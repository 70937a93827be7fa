#pragma once

// Driven pair of coupled damped oscillators.
//
// State ordering is (p1, p2, q1, q2). The first-order system matrix is
//
//   M(f) = [ -2g-2k1   2g        -f-w1^2   f       ]
//          [  2g      -2g-2k2     f       -f-w2^2  ]
//          [  1        0          0        0       ]
//          [  0        1          0        0       ]
//
// and splits as M(f) = M0 + f M1 with M1 nonzero only in its upper-right
// 2x2 block ((-1, 1), (1, -1)).
//
// Frequency convention. Complex eigenfrequencies are reported as resonance
// energies E = i*lambda for each eigenvalue lambda of M, so a mode evolves as
// exp(-i E t) and decaying modes have Im E < 0. The secular function is
//
//   D(E) = det(E I - i M) = det(-i E I - M),
//
// which is monic of degree 4 (the leading factor (-i)^4 = 1 divides out). It
// equals conj(det(i E* I - M)) for real M, so its zeros are the complex
// conjugates of the zeros of det(i w I - M); the physical root lies in the
// lower half plane. Real drive frequencies are unaffected: the stationary
// response to c exp(i w t) is (i w I - M)^-1 c.

#include <complex>
#include <string>

#include "epfano/linalg.hpp"

namespace epfano {

struct OscillatorParams {
    double omega1 = 1.0;
    double omega2 = 1.0;
    double k1 = 0.0;
    double k2 = 0.0;
    double g = 0.0;
    double f = 0.0;
    cplx c1 = 0.0;
    cplx c2 = 0.0;

    /// Throws ParameterError on nonpositive or non-finite frequencies,
    /// negative or non-finite damping, or k_j >= omega_j.
    void validate() const;

    OscillatorParams with_coupling(double f_new, double g_new) const
    {
        OscillatorParams p = *this;
        p.f = f_new;
        p.g = g_new;
        return p;
    }
};

struct SystemMatrices {
    Mat4 m0;
    Mat4 m1;

    Mat4 at(double f) const { return m0 + cplx{f} * m1; }
};

struct StateVector {
    cplx p1 = 0.0;
    cplx p2 = 0.0;
    cplx q1 = 0.0;
    cplx q2 = 0.0;

    Vec4 as_array() const { return {p1, p2, q1, q2}; }
    static StateVector from_array(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
};

SystemMatrices build_system_matrices(const OscillatorParams& params);

/// M(f) with the params' own coupling f.
Mat4 system_matrix(const OscillatorParams& params);

/// Monic quartic D(E) = det(E I - i M(f)) using the supplied f and g in
/// place of the stored ones. Coefficients come from Faddeev-LeVerrier.
Polynomial char_poly(const OscillatorParams& params, double f, double g);

/// det(E I - i M(f)) by direct LU on the 4x4 matrix.
cplx secular_det(const OscillatorParams& params, double f, double g, cplx omega);

/// dD/dE from the differentiated coefficients of char_poly.
cplx det_derivative(const OscillatorParams& params, double f, double g, cplx omega);

/// Amplitude x of the stationary response x exp(i w t) to the drive
/// (c1, c2, 0, 0) exp(i w t): x = (i w I - M)^-1 c. Throws SingularityError
/// when i w is an eigenvalue of M.
StateVector stationary_solution(const OscillatorParams& params, double omega_drive);

/// Resonance energies E = i*lambda of M(f) at the given (f, g), all four.
std::array<cplx, 4> resonance_energies(const OscillatorParams& params, double f, double g);

}  // namespace epfano
