#pragma once

#include <string>

#include "ringdown/signal.hpp"

namespace ringdown {

enum class WaveformFormat { csv };

/// Parse `time,<ch1>,<ch2>,...` with ascending, uniformly spaced times
/// (relative jitter <= 1e-6). Times are seconds.
Signal load_waveforms(const std::string& path, WaveformFormat format = WaveformFormat::csv);

/// Write the same layout back, 12 significant digits, LF line endings.
void write_waveforms(const std::string& path, const Signal& signal);

} // namespace ringdown
