#pragma once

#include <complex>

namespace mathcast {

using Complex = std::complex<double>;

// All functions use principal branches. They throw Error(kDomainError) at
// poles and Error(kUnsupportedFunction) outside their supported region.
namespace sf {

Complex gamma(Complex z);
// 1/Gamma, zero at the poles of Gamma.
Complex rgamma(Complex z);
Complex beta(Complex a, Complex b);
Complex digamma(Complex z);
Complex pochhammer(Complex a, Complex n);
Complex binomial(Complex n, Complex k);
Complex upper_incomplete_gamma(Complex a, Complex z);

Complex erf(Complex z);
Complex erfc(Complex z);
// Repeated integral i^n erfc(z), n >= -1.
Complex ierfc(int n, Complex z);

Complex bessel_j(Complex nu, Complex z);
Complex bessel_y(Complex nu, Complex z);
Complex bessel_i(Complex nu, Complex z);
Complex bessel_k(Complex nu, Complex z);
Complex struve_h(Complex nu, Complex z);
Complex airy_ai(Complex z);
Complex airy_bi(Complex z);

Complex hurwitz_zeta(Complex s, Complex a);
Complex riemann_zeta(Complex s);

Complex expint_e1(Complex z);
Complex expint_ei(Complex z);
Complex expint_ein(Complex z);

Complex hyp2f1(Complex a, Complex b, Complex c, Complex z);
Complex jacobi_p(Complex n, Complex alpha, Complex beta, Complex x);
Complex laguerre_l(Complex n, Complex alpha, Complex x);
Complex legendre_p(Complex n, Complex x);
Complex q_pochhammer(Complex a, Complex q, Complex n);

// Integer value of z when it is one (within 1e-12), used for poles and
// terminating series.
bool is_integer(Complex z, long long* value = nullptr);

}  // namespace sf
}  // namespace mathcast
