#pragma once

// Expressions and target strings that must reproduce byte-for-byte.
namespace mathcast::golden {

inline constexpr const char* kHurwitzPrime = "\\Hurwitzzeta'@{s^2}{a}";
inline constexpr const char* kHurwitzMaple = "subs(temp=(s)^(2),diff(Zeta(0,temp,a),temp$(1)))";
inline constexpr const char* kHurwitzMathematica = "D[HurwitzZeta[temp,a],{temp,1}]/.temp->(s)^(2)";

inline constexpr const char* kJacobi =
    "\\JacobiP{\\alpha}{\\beta}{n}@{x} = 2^{-n}\\sum_{\\ell=0}^{n}\\binom{n+\\alpha}{\\ell}"
    "\\binom{n+\\beta}{n-\\ell}(x-1)^{n-\\ell}(x+1)^{\\ell}";
inline constexpr const char* kJacobiMathematica =
    "JacobiP[n,\\[Alpha],\\[Beta],x]==(2)^(-n)*Sum[Binomial[n+\\[Alpha],\\[ScriptL]]*Binomial[n+"
    "\\[Beta],n-\\[ScriptL]]*(x-1)^(n-\\[ScriptL])*(x+1)^\\[ScriptL],{\\[ScriptL],0,n},"
    "GenerateConditions->None]";

inline constexpr const char* kStruve =
    "\\StruveK{\\nu}@{z} = \\frac{2(\\frac{1}{2}z)^\\nu}{\\sqrt{\\pi}\\EulerGamma@{\\nu+\\frac{1}{2}}}"
    "\\int_0^\\infty e^{-zt}(1+t^2)^{\\nu-\\frac{1}{2}}\\mathrm{d}t";
inline constexpr const char* kStruveMathematica =
    "StruveH[\\[Nu],z]-BesselY[\\[Nu],z]==Divide[2*(Divide[1,2]*z)^\\[Nu],Sqrt[Pi]*Gamma[\\[Nu]+"
    "Divide[1,2]]]*Integrate[Exp[-z*t]*(1+(t)^(2))^(\\[Nu]-Divide[1,2]),{t,0,Infinity},"
    "GenerateConditions->None]";

inline constexpr const char* kErfc =
    "\\frac{\\mathrm{d}^n}{\\mathrm{d}z^n}(e^{z^2}\\operatorname{erfc} z) = (-1)^n 2^n n! "
    "e^{z^2}\\ierfc{n}@{z}";
inline constexpr const char* kErfcMaple =
    "diff( exp(z^2)*erfc(z), [z$(n)] ) = (-1)^(n)*(2)^(n)*factorial(n)*exp(z^2)*erfc(n, z)";

}  // namespace mathcast::golden
