#include "lzd/pauli_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lzd {

namespace {
double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }
}  // namespace

void require_valid(const PauliState& st, double tol) {
    const double ns = norm3(st.s);
    if (!(ns <= 1.0 + tol)) throw precondition_error("PauliState: |s| exceeds 1", ns);
    const double nr = norm3(st.r);
    if (!(nr <= 1.0 + tol)) throw precondition_error("PauliState: |r| exceeds 1", nr);
    for (const auto& row : st.chi)
        for (double x : row)
            if (!(std::abs(x) <= 1.0 + tol)) throw precondition_error("PauliState: |chi_ij| exceeds 1", x);
}

PauliState schmidt_initial(double eta) {
    if (!(eta >= 0.0 && eta <= 0.5 * std::numbers::pi))
        throw std::invalid_argument("schmidt_initial: eta must lie in [0, pi/2]");
    const double c = std::cos(2.0 * eta);
    const double s = std::sin(2.0 * eta);
    PauliState st;
    st.s = {0.0, 0.0, c};
    st.r = {0.0, 0.0, c};
    st.chi[0][0] = s;
    st.chi[1][1] = -s;
    st.chi[2][2] = 1.0;
    return st;
}

double max_abs_difference(const PauliState& a, const PauliState& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        d = std::max(d, std::abs(a.s[i] - b.s[i]));
        d = std::max(d, std::abs(a.r[i] - b.r[i]));
        for (std::size_t j = 0; j < 3; ++j) d = std::max(d, std::abs(a.chi[i][j] - b.chi[i][j]));
    }
    return d;
}

}  // namespace lzd
