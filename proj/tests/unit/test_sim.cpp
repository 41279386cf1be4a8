#include "oracles.hpp"

#include "sonoloc/dsp/fft.hpp"
#include "sonoloc/dsp/kaiser.hpp"
#include "sonoloc/errors.hpp"
#include "sonoloc/sim/array.hpp"
#include "sonoloc/sim/point_cloud.hpp"
#include "sonoloc/sim/propagation.hpp"
#include "sonoloc/sim/scene.hpp"
#include "sonoloc/sim/waveform.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace sonoloc;
using namespace sonoloc::sim;

namespace {

SyntheticScene quiet_scene(MicArray array, double duration) {
    SyntheticScene s;
    s.array = std::move(array);
    s.duration = duration;
    s.snr_db = std::nullopt;
    return s;
}

SourceSpec click_at(const Vec3& pos) {
    SourceSpec src;
    src.position = pos;
    src.waveform = CustomWaveform{};
    std::get<CustomWaveform>(src.waveform).samples.assign(1, 1.0);
    return src;
}

std::vector<double> to_double(const std::vector<float>& x) { return {x.begin(), x.end()}; }

}  // namespace

TEST(RingArray, FourMicsOnAxes) {
    const MicArray a = make_ring_array(4, 1.0, 192000.0);
    ASSERT_EQ(a.size(), 4u);
    const std::vector<Vec3> expected{{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_LT((a.positions[i] - expected[i]).norm(), 1e-12);
}

TEST(RingArray, FortyEightOnCircle) {
    const MicArray a = make_ring_array(48, 0.35, 192000.0);
    ASSERT_EQ(a.size(), 48u);
    for (const Vec3& p : a.positions) {
        EXPECT_NEAR(p.norm(), 0.35, 1e-12);
        EXPECT_EQ(p.z(), 0.0);
    }
}

TEST(RingArray, TwoMicsAntipodal) {
    const MicArray a = make_ring_array(2, 0.5, 16000.0);
    EXPECT_NEAR((a.positions[0] - a.positions[1]).norm(), 1.0, 1e-12);
}

TEST(RingArray, RejectsBadInput) {
    EXPECT_THROW(make_ring_array(0, 0.35, 192000.0), InvalidArgument);
    EXPECT_THROW(make_ring_array(4, -1.0, 192000.0), InvalidArgument);
}

TEST(Waveform, TonePeaksAtItsFrequency) {
    const auto x = synth_waveform(Tone{1000.0}, 1.0, 16000.0, 0);
    const auto p = dsp::power_spectrum(x);
    EXPECT_EQ(static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin()), 1000u);
}

TEST(Waveform, ImpulseTrainClickCount) {
    EXPECT_EQ(impulse_onsets(ImpulseTrain{0.5, 0.004, 0, 0}, 2.0).size(), 4u);
}

TEST(Waveform, BandNoiseStaysInBand) {
    const auto x = synth_waveform(BandLimitedNoise{1000.0, 5000.0}, 1.0, 192000.0, 42);
    const auto p = dsp::power_spectrum(x);
    const double df = 192000.0 / static_cast<double>(x.size());
    double in = 0.0, total = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double f = static_cast<double>(k) * df;
        total += p[k];
        if (f >= 1000.0 && f <= 5000.0) in += p[k];
    }
    EXPECT_LT(1.0 - in / total, 0.01);
}

TEST(Waveform, SeedDeterminism) {
    const auto a = synth_waveform(BandLimitedNoise{}, 0.1, 48000.0, 9);
    const auto b = synth_waveform(BandLimitedNoise{}, 0.1, 48000.0, 9);
    const auto c = synth_waveform(BandLimitedNoise{}, 0.1, 48000.0, 10);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
}

TEST(Propagation, AnalyticDelayOfSingleImpulse) {
    SyntheticScene s = quiet_scene(MicArray{{Vec3::Zero(), Vec3(0.2, 0.0, 0.0)}, 192000.0}, 0.01);
    s.sources.push_back(click_at({0, 0, 1.0}));
    const auto rec = simulate_propagation(s, 1);
    const auto& ch = rec.channels[0];
    const auto peak = std::max_element(ch.begin(), ch.end(), [](float a, float b) { return std::abs(a) < std::abs(b); }) - ch.begin();
    EXPECT_NEAR(static_cast<double>(peak), std::round(192000.0 / 343.0), 1.0);
    EXPECT_NEAR(std::round(192000.0 / 343.0), 560.0, 0.0);
}

TEST(Propagation, EquidistantMicsMatch) {
    SyntheticScene s = quiet_scene(make_ring_array(4, 0.3, 48000.0), 0.05);
    SourceSpec src;
    src.position = Vec3(0.0, 0.0, 1.2);  // on axis: equidistant from every mic
    src.waveform = BandLimitedNoise{500.0, 4000.0};
    s.sources.push_back(src);
    const auto rec = simulate_propagation(s, 2);
    for (std::size_t i = 0; i < rec.length(); ++i) EXPECT_NEAR(rec.channels[0][i], rec.channels[1][i], 1e-6);
}

TEST(Propagation, CrossCorrelationLagMatchesPathDifference) {
    SyntheticScene s = quiet_scene(make_ring_array(2, 0.5, 48000.0), 0.1);
    SourceSpec src;
    src.position = Vec3(1.5, 0.4, 1.0);
    src.waveform = BandLimitedNoise{300.0, 8000.0};
    s.sources.push_back(src);
    const auto rec = simulate_propagation(s, 3);
    const double expected = ((src.position - s.array.positions[1]).norm() - (src.position - s.array.positions[0]).norm()) /
                            s.speed_of_sound * 48000.0;
    const auto lag = oracle::xcorr_lag(to_double(rec.channels[0]), to_double(rec.channels[1]), 200);
    EXPECT_NEAR(static_cast<double>(lag), expected, 1.0);
}

TEST(Propagation, Linearity) {
    SyntheticScene a = quiet_scene(make_ring_array(3, 0.2, 48000.0), 0.05), b = a, ab = a;
    SourceSpec s1, s2;
    s1.position = Vec3(0.3, -0.1, 1.0);
    s1.waveform = Tone{700.0};
    s2.position = Vec3(-0.4, 0.2, 0.8);
    s2.waveform = Tone{1900.0};
    s2.amplitude = 0.5;
    a.sources = {s1};
    b.sources = {s2};
    ab.sources = {s1, s2};
    const auto ra = simulate_propagation(a, 0), rb = simulate_propagation(b, 0), rab = simulate_propagation(ab, 0);
    for (std::size_t m = 0; m < 3; ++m)
        for (std::size_t i = 0; i < rab.length(); ++i) {
            const double sum = static_cast<double>(ra.channels[m][i]) + rb.channels[m][i];
            EXPECT_NEAR(rab.channels[m][i], sum, 1e-6 * std::max(1.0, std::abs(sum)));
        }
}

TEST(Propagation, BruteForceOracle) {
    SyntheticScene s = quiet_scene(make_ring_array(4, 0.35, 48000.0), 0.05);
    SourceSpec s1, s2;
    s1.position = Vec3(0.1, 0.05, 0.9);
    s1.waveform = BandLimitedNoise{1000.0, 6000.0};
    s2.position = Vec3(-0.3, 0.0, 1.4);
    s2.waveform = Tone{2500.0};
    s2.amplitude = 0.7;
    s.sources = {s1, s2};
    const auto rec = simulate_propagation(s, 17);
    const double fs = s.array.sample_rate;
    const auto n = static_cast<long long>(rec.length());
    std::vector<std::vector<double>> sig;
    for (std::size_t k = 0; k < s.sources.size(); ++k) sig.push_back(render_source(s.sources[k], s.duration, fs, mix_seed(17, k)));
    double peak = 0.0;
    std::vector<std::vector<double>> ref(4, std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (std::size_t m = 0; m < 4; ++m) {
        for (std::size_t k = 0; k < s.sources.size(); ++k) {
            const double r = (s.sources[k].position - s.mic_world(m)).norm();
            const double d = r / s.speed_of_sound * fs;
            const double gain = s.sources[k].amplitude / std::max(r, 0.1);
            for (long long i = 0; i < n; ++i) {
                double v = 0.0;
                const auto lo = std::max(0LL, static_cast<long long>(std::floor(static_cast<double>(i) - d)) - 33);
                const auto hi = std::min(n - 1, static_cast<long long>(std::ceil(static_cast<double>(i) - d)) + 33);
                for (long long j = lo; j <= hi; ++j) v += sig[k][static_cast<std::size_t>(j)] * dsp::windowed_sinc(static_cast<double>(i) - d - static_cast<double>(j), 32.0, 8.0);
                ref[m][static_cast<std::size_t>(i)] += gain * v;
            }
        }
        for (double v : ref[m]) peak = std::max(peak, std::abs(v));
    }
    for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) EXPECT_NEAR(rec.channels[m][i], ref[m][i], 1e-6 * peak);
}

TEST(Propagation, DelayReciprocity) {
    const Vec3 a(0.2, -0.3, 1.1), b(-0.5, 0.1, 0.2);
    EXPECT_DOUBLE_EQ(propagation_delay_samples(a, b, 343.0, 192000.0), propagation_delay_samples(b, a, 343.0, 192000.0));
}

TEST(Propagation, NoiseMeetsSnr) {
    SyntheticScene s = quiet_scene(make_ring_array(2, 0.3, 16000.0), 1.0);
    SourceSpec src;
    src.position = Vec3(0, 0, 1);
    src.waveform = Tone{440.0};
    s.sources.push_back(src);
    const auto clean = simulate_propagation(s, 4);
    s.snr_db = 10.0;
    const auto noisy = simulate_propagation(s, 4);
    double ps = 0.0, pn = 0.0;
    for (std::size_t i = 0; i < clean.length(); ++i) {
        ps += clean.channels[0][i] * clean.channels[0][i];
        const double e = noisy.channels[0][i] - clean.channels[0][i];
        pn += e * e;
    }
    EXPECT_NEAR(10.0 * std::log10(ps / pn), 10.0, 0.3);
}

TEST(Propagation, DeterministicForSeed) {
    SyntheticScene s = quiet_scene(make_ring_array(3, 0.3, 16000.0), 0.2);
    s.snr_db = 20.0;
    SourceSpec src;
    src.position = Vec3(0.1, 0, 1);
    src.waveform = BandLimitedNoise{};
    s.sources.push_back(src);
    EXPECT_EQ(simulate_propagation(s, 5).channels, simulate_propagation(s, 5).channels);
}

TEST(Propagation, SourceOnMicThrows) {
    SyntheticScene s = quiet_scene(make_ring_array(2, 0.3, 16000.0), 0.1);
    SourceSpec src;
    src.position = s.array.positions[0];
    s.sources.push_back(src);
    EXPECT_THROW(simulate_propagation(s, 0), InvalidArgument);
}

TEST(PointCloud, SphereBehindCameraIsEmpty) {
    SyntheticScene s;
    s.primitives.push_back({Sphere{Vec3(0, 0, -2), 0.3}, 1e4});
    EXPECT_TRUE(synth_point_cloud(s, 0).empty());
}

TEST(PointCloud, SpherePointsOnSurface) {
    SyntheticScene s;
    const Vec3 c(0.1, -0.2, 2.0);
    s.primitives.push_back({Sphere{c, 0.25}, 2e4});
    const auto cloud = synth_point_cloud(s, 1);
    ASSERT_FALSE(cloud.empty());
    for (const Vec3& p : cloud.points) EXPECT_NEAR((p - c).norm(), 0.25, 1e-9);
}

TEST(PointCloud, BoxCountMatchesVisibleArea) {
    SyntheticScene s;
    Box box;
    box.center = Vec3(0.2, 0.1, 2.0);
    box.half_extents = Vec3(0.3, 0.2, 0.25);
    box.rotation = rotation_about_z(0.4);
    s.primitives.push_back({box, 1e4});
    const auto cloud = synth_point_cloud(s, 2);
    // Oracle area: sum over faces whose outward normal points at the camera.
    const Vec3 cam = s.camera.center_world();
    double area = 0.0;
    for (int axis = 0; axis < 3; ++axis)
        for (int sign : {-1, 1}) {
            const Vec3 n = box.rotation.col(axis) * sign;
            const Vec3 face = box.center + n * box.half_extents[axis];
            const double a = 4.0 * box.half_extents[(axis + 1) % 3] * box.half_extents[(axis + 2) % 3];
            if (n.dot(cam - face) > 0.0) area += a;
        }
    EXPECT_NEAR(visible_box_area(box, cam), area, 1e-12);
    EXPECT_NEAR(static_cast<double>(cloud.size()), 1e4 * area, 0.1 * 1e4 * area);
}

TEST(PointCloud, DeterministicForSeed) {
    SyntheticScene s;
    s.primitives.push_back({Sphere{Vec3(0, 0, 2), 0.3}, 1e4});
    EXPECT_EQ(synth_point_cloud(s, 3).points, synth_point_cloud(s, 3).points);
}

TEST(GroundTruth, ChiselCube) {
    SourceSpec src;
    src.position = Vec3(0, 0, 2);
    const OrientedBox3 box = ground_truth_box(src, localize::chiseling_profile());
    EXPECT_LT((box.center - src.position).norm(), 1e-12);
    EXPECT_LT((box.half_extents - Vec3::Constant(0.025)).norm(), 1e-12);
    const Aabb3 b = box.bounds();
    EXPECT_LT((b.min - Vec3(-0.025, -0.025, 1.975)).norm(), 1e-12);
}

TEST(GroundTruth, InstrumentExtents) {
    localize::ActionProfile p = localize::sawing_profile();
    p.box_rule = localize::InstrumentExtents{Vec3(0.3, 0.1, 0.1)};
    SourceSpec src;
    const Aabb3 b = ground_truth_box(src, p).bounds();
    EXPECT_LT((b.extents() - Vec3(0.3, 0.1, 0.1)).norm(), 1e-12);
    src.orientation = rotation_about_z(std::numbers::pi / 2.0);
    const Aabb3 r = ground_truth_box(src, p).bounds();
    EXPECT_LT((r.extents() - Vec3(0.1, 0.3, 0.1)).norm(), 1e-12);
}

TEST(Scene, EventTimesAndSpans) {
    SourceSpec click;
    click.waveform = ImpulseTrain{0.5, 0.004, 0, 0};
    click.onsets = {0.2, 0.9};
    const auto spans = source_event_spans(click, 2.0);
    ASSERT_EQ(spans.size(), 2u);
    EXPECT_DOUBLE_EQ(spans[0].start, 0.2);
    EXPECT_NEAR(spans[0].end, 0.212, 1e-12);
    SourceSpec noise;
    noise.waveform = BandLimitedNoise{};
    noise.active_intervals = {{0.3, 0.8}, {1.1, 1.5}};
    EXPECT_EQ(source_event_times(noise, 2.0), (std::vector<double>{0.3, 1.1}));
}
