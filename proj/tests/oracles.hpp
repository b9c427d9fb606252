#pragma once

// Frozen expectations shared by the unit suite and the acceptance runner.

#include <random>
#include <set>
#include <string>
#include <vector>

namespace mathcast::testing {

// Gamma at 10 points, 50 significant digits (computed once with mpmath at
// 50-digit precision, frozen here).
struct GammaRef {
  double re, im;
  const char* gre;
  const char* gim;
};

inline const GammaRef kGammaTable[] = {
    {0.5, 0, "1.7724538509055160272981674833411451827975494561224", "0"},
    {1.5, 0, "0.88622692545275801364908374167057259139877472806119", "0"},
    {2.5, 0, "1.3293403881791370204736256125058588870981620920918", "0"},
    {7.25, 0, "1155.3810139199896872027037679705565787743008342454", "0"},
    {-1.5, 0, "2.3632718012073547030642233111215269103967326081632", "0"},
    {-0.25, 0, "-4.9016668098607105805163932134515621074049569924323", "0"},
    {0.5, 1, "0.30069461726065581621738946383521044023067596416919",
     "-0.42496787943312381260984964025740597047348422233406"},
    {2, -3, "-0.082395272665611883673870314364625977489290737903843",
     "-0.09177428743525931459566741729377691773837791463104"},
    {-2.5, 0.5, "-0.33387520352243233740327727033956558807270634792338",
     "-0.20645730796360841491828760756387298838346687701255"},
    {12.75, 0, "255371835.6992111004647107356928698826986200508286", "0"},
};

// Sum expressions and the part each operator takes as its argument.
struct SumRow {
  const char* latex;
  std::size_t op;
  const char* argument;
};

inline const std::vector<SumRow> kSumRows = {
    SumRow{"\\sum_{n=1}^N c + 2", 0, "c"},
    SumRow{"\\sum_{n=1}^N c + \\tfrac{c}{n}", 0, "c+\\tfrac{c}{n}"},
    SumRow{"\\sum_{n=1}^N c + n^2 + N", 0, "c+n^{2}"},
    SumRow{"\\sum_{n=1}^N n + \\sum_{k=1}^N k", 0, "n"},
    SumRow{"\\sum_{n=1}^N n + \\sum_{k=1}^N k", 3, "k"},
    SumRow{"\\sum_{n=1}^N n + \\sum_{k=1}^n k", 0, "n+\\sum_{k=1}^{n}k"},
    SumRow{"\\sum_{n=1}^N c + \\sum_{k=1}^N k + n", 0,
           "c+\\sum_{k=1}^{N}k+n"},
    SumRow{"\\sum_{n=1}^N c + \\sum_{k=1}^N k + n", 3, "k"}};

struct BlueprintRow {
  const char* subscript;
  std::vector<std::string> vars;
  const char* lower;
  const char* upper;
  const char* membership;
};

inline const std::vector<BlueprintRow> kBlueprintRows = {
    BlueprintRow{"0 \\leq n < k \\leq 10", {"n", "k"}, "0", "10", "-"},
    BlueprintRow{"-\\infty < n < \\infty", {"n"}, "-\\infty", "\\infty", "-"},
    BlueprintRow{"0 < n, k < 10", {"n", "k"}, "1", "9", "-"},
    BlueprintRow{"0 \\leq k < 10", {"k"}, "0", "9", "-"},
    BlueprintRow{"0 < n, k \\leq 10", {"n", "k"}, "1", "10", "-"},
    BlueprintRow{"n, k \\leq N+5", {"n", "k"}, "-\\infty", "N+5", "-"},
    BlueprintRow{"n \\in \\{1,2,3\\}", {"n"}, "-", "-", "\\{1,2,3\\}"},
    BlueprintRow{"n,k,l = 1", {"n", "k", "l"}, "1", "\\infty", "-"}};

// Random nested operator trees: bound names never leak into the free set,
// and every free name used in a leaf is reported.
class TreeGen {
 public:
  explicit TreeGen(unsigned seed) : rng_(seed) {}

  std::string term(int depth) {
    int pick = depth >= 3 ? 0 : pick_in(0, 5);
    switch (pick) {
      case 0:
      case 1: {
        std::string v = kFree[pick_in(0, 4)];
        used_.insert(v);
        return v;
      }
      case 2: {
        std::string b = fresh_bound();
        std::string hi = maybe_upper();
        return "\\sum_{" + b + "=0}^{" + hi + "}(" + term(depth + 1) + "+" + b + ")";
      }
      case 3: {
        std::string b = fresh_bound();
        return "\\int_{0}^{1}(" + term(depth + 1) + "+" + b + ")\\mathrm{d}" + b;
      }
      case 4: {
        std::string b = fresh_bound();
        std::string hi = maybe_upper();
        return "\\prod_{" + b + "=1}^{" + hi + "}(" + term(depth + 1) + " " + b + ")";
      }
      default:
        return "\\sin@{" + term(depth + 1) + "}+" + term(depth + 1);
    }
  }

  const std::set<std::string>& used() const { return used_; }
  const std::set<std::string>& bound() const { return bound_; }

 private:
  static constexpr const char* kFree[] = {"a", "b", "c", "x", "y"};
  static constexpr const char* kBound[] = {"k", "j", "t", "m", "p", "q", "r", "u"};

  int pick_in(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::string fresh_bound() {
    std::string b = kBound[pick_in(0, 7)];
    bound_.insert(b);
    return b;
  }
  std::string maybe_upper() {
    if (pick_in(0, 1) == 0) return "3";
    used_.insert("N");
    return "N";
  }

  std::mt19937 rng_;
  std::set<std::string> used_;
  std::set<std::string> bound_;
};

}  // namespace mathcast::testing
