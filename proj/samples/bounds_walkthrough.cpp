// Evaluates the dimension-free bounds for a handful of envelope values and
// compares them with the ambient-dimension baseline.
#include <cstdio>
#include <vector>

#include "dimfree/bounds_core.hpp"
#include "dimfree/partitions.hpp"
#include "dimfree/tailbounds.hpp"

int main() {
    using namespace dimfree;
    std::vector<double> envelopes{1.0, 2.0, 0.5, 3.0};
    auto summary = summarize_envelopes(envelopes, pairing_partition(4));
    std::printf("whole-set growth %.6g, pairing growth %.6g, tau %d\n", summary.whole, summary.partitioned,
                summary.tau);

    for (double t : {6.0, 12.0, 48.0, 96.0}) {
        auto whole = whole_set_tail(t, 4, summary.whole);
        auto part = partitioned_tail(t, summary);
        double ad = ad_tail(t, {200.0, 4.0, 3.0, 1.0});
        std::printf("t=%-5g whole bennett %-12.5g pairing bennett %-12.5g AD(dim=200) %.5g\n", t, whole.bennett,
                    part.bennett, ad);
    }

    auto opt = laplace_infimum(6.0, 3.0, DominatingFunction::exponential(2));
    std::printf("numeric infimum at t=6, phi=3: theta=%.6f bound=%.9f\n", opt.theta, opt.bound);
    return 0;
}
