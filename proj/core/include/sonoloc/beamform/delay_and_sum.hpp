#pragma once

#include "sonoloc/beamform/heatmap.hpp"
#include "sonoloc/beamform/steering.hpp"
#include "sonoloc/recording.hpp"

namespace sonoloc::beamform {

/// Fractional-delay realization. Steering delays are rounded to
/// 1/delay_resolution of a sample and interpolated with an
/// interp_taps-point Kaiser-windowed sinc.
struct DelayAndSumOptions {
    int interp_taps = 16;
    int delay_resolution = 16;
    double kaiser_beta = 6.0;

    void validate() const;
};

/// Time-domain delay-and-sum. For each cell, every channel is advanced by its
/// steering delay, scaled by its weight and summed; the cell value is the RMS
/// of that sum over the window's samples [round(start*fs), round(end*fs)).
/// Channel samples outside the recording read as zero. Delayed channels are
/// interpolated in double precision and summed in single precision. The
/// result is not normalized and does not depend on `jobs`.
///
/// Throws RateMismatch if the recording and array rates differ (or the
/// channel count differs from the array), OutOfRangeWindow if the window is
/// empty or extends past the recording.
AcousticHeatmap delay_and_sum(const MultichannelRecording& recording, const SteeringTable& steering,
                              const TimeWindow& window, const DelayAndSumOptions& options = {},
                              std::size_t jobs = 1);

/// Window [start, start + 1/25 s) aligned to a trigger time.
TimeWindow video_frame_window(double start);

}  // namespace sonoloc::beamform
