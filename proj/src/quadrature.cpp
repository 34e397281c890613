#include "darkliq/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace darkliq::numerics {
namespace {

// Kronrod 15-point nodes (nonnegative half) and weights; Gauss 7-point weights
// for the odd-indexed Kronrod nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, double rel_tol, std::size_t max_intervals) {
    QuadratureResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    const double sign = b < a ? -1.0 : 1.0;
    if (b < a) std::swap(a, b);

    std::priority_queue<Segment> heap;
    heap.push(gk15(f, a, b));
    double total = heap.top().value;
    double error = heap.top().error;

    while (error > std::max(abs_tol, rel_tol * std::abs(total)) && heap.size() < max_intervals) {
        const Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {  // interval exhausted in floating point
            heap.push(worst);
            break;
        }
        const Segment left = gk15(f, worst.a, mid);
        const Segment right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from the final partition, in order, to shed accumulated drift.
    std::vector<Segment> parts;
    parts.reserve(heap.size());
    while (!heap.empty()) {
        parts.push_back(heap.top());
        heap.pop();
    }
    std::sort(parts.begin(), parts.end(), [](const Segment& l, const Segment& r) { return l.a < r.a; });
    double sum = 0.0, err = 0.0;
    for (const auto& s : parts) {
        sum += s.value;
        err += s.error;
    }
    out.value = sign * sum;
    out.error = err;
    out.intervals = parts.size();
    out.converged = err <= std::max(abs_tol, rel_tol * std::abs(sum));
    return out;
}

}  // namespace darkliq::numerics
