#include "ringdown/envelope.hpp"

#include <cmath>
#include <cstddef>

#include "ringdown/errors.hpp"

namespace ringdown {

Envelope envelope(const Signal& signal, const std::string& channel, const Interval& window) {
    const auto& data = signal.channel(channel);
    auto [first, last] = signal.sample_range(window);
    const std::size_t n = last - first + 1;

    std::vector<double> mag(n);
    for (std::size_t k = 0; k < n; ++k) mag[k] = std::abs(data[first + k]);

    // knots: local maxima of |x| (plateaus count), plus both endpoints
    std::vector<std::size_t> knots;
    knots.push_back(0);
    for (std::size_t k = 1; k + 1 < n; ++k)
        if (mag[k] >= mag[k - 1] && mag[k] >= mag[k + 1]) knots.push_back(k);
    if (knots.back() != n - 1) knots.push_back(n - 1);

    Envelope env;
    env.times.resize(n);
    env.amplitudes.resize(n);
    for (std::size_t k = 0; k < n; ++k) env.times[k] = signal.time(first + k);

    std::size_t seg = 0;
    for (std::size_t k = 0; k < n; ++k) {
        while (seg + 1 < knots.size() && knots[seg + 1] < k) ++seg;
        if (k <= knots[0]) {
            env.amplitudes[k] = mag[knots[0]];
        } else if (seg + 1 >= knots.size()) {
            env.amplitudes[k] = mag[knots.back()];
        } else {
            const std::size_t a = knots[seg], b = knots[seg + 1];
            const double w = b == a ? 0.0 : static_cast<double>(k - a) / static_cast<double>(b - a);
            env.amplitudes[k] = (1.0 - w) * mag[a] + w * mag[b];
        }
    }
    return env;
}

} // namespace ringdown
