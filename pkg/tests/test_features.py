"""Tests for framing, time and frequency features, MFCC and window aggregation."""

import numpy as np
import pytest

from acoustic import (
    FEATURE_NAMES,
    AudioClip,
    FrameSpec,
    Spectrum,
    WindowKind,
    extract_feature_matrix,
    extract_features,
    frame_signal,
    mel_filterbank,
    mfcc,
    power_spectrum,
    short_time_energy,
    spectral_centroid_spread,
    write_feature_dump,
    zero_crossing_rate,
)
from acoustic.features import hz_to_mel, mel_to_hz, next_power_of_two
from core.errors import (
    InsufficientDataError,
    InvalidConfigurationError,
    InvalidSizeError,
    UndefinedCentroidError,
)
from synth import SceneSpec, synth_audio


def naive_dft_magnitudes(x: np.ndarray, n: int) -> np.ndarray:
    """O(N^2) DFT of the zero-padded frame, bins 0..n/2."""
    padded = np.zeros(n)
    padded[: x.size] = x
    k = np.arange(n // 2 + 1)[:, None]
    t = np.arange(n)[None, :]
    basis = np.exp(-2j * np.pi * k * t / n)
    return np.abs(basis @ padded)


class TestFrameSignal:
    """Tests for frame_signal."""

    def test_rectangular_frames(self):
        """Test that N=100, frame 50, hop 25 gives 3 frames starting at 0, 25, 50."""
        samples = np.linspace(-1, 1, 100)
        clip = AudioClip(samples=samples, sample_rate=1000)
        spec = FrameSpec(frame_length=50, hop_length=25, window=WindowKind.RECTANGULAR)

        frames = frame_signal(clip, spec)

        assert frames.shape == (3, 50)
        np.testing.assert_array_equal(frames[0], samples[:50])
        np.testing.assert_array_equal(frames[2], samples[50:100])

    def test_hamming_on_ones_is_the_window(self):
        """Test that windowing an all-ones frame yields the window coefficients."""
        clip = AudioClip(samples=np.ones(64), sample_rate=1000)
        spec = FrameSpec(frame_length=64, hop_length=32, window=WindowKind.HAMMING)

        frames = frame_signal(clip, spec)

        np.testing.assert_allclose(frames[0], np.hamming(64))

    def test_frame_count_matches_enumeration(self, rng):
        """Test that frame counts match brute-force start enumeration."""
        for _ in range(50):
            frame = int(rng.integers(2, 60))
            hop = int(rng.integers(1, frame + 1))
            n = int(rng.integers(frame, 400))
            clip = AudioClip(samples=rng.uniform(-1, 1, n), sample_rate=8000)

            frames = frame_signal(clip, FrameSpec(frame_length=frame, hop_length=hop))

            expected = len([s for s in range(0, n) if s + frame <= n and s % hop == 0])
            assert frames.shape == (expected, frame)

    def test_clip_shorter_than_frame_raises(self):
        """Test that a clip shorter than one frame is rejected."""
        clip = AudioClip(samples=np.zeros(10), sample_rate=1000)

        with pytest.raises(InsufficientDataError):
            frame_signal(clip, FrameSpec(frame_length=20, hop_length=10))

    def test_hop_longer_than_frame_is_invalid(self):
        """Test that FrameSpec rejects hop > frame."""
        with pytest.raises(ValueError):
            FrameSpec(frame_length=10, hop_length=11)


class TestTimeDomain:
    """Tests for zero crossing rate and short-time energy."""

    def test_constant_frame_has_no_crossings(self):
        """Test that a constant frame has rate 0."""
        assert zero_crossing_rate([0.5, 0.5, 0.5]) == 0.0

    def test_alternating_frame_crosses_everywhere(self):
        """Test that an alternating frame has rate 1."""
        assert zero_crossing_rate([1, -1, 1, -1]) == 1.0

    def test_zeros_keep_the_previous_sign(self):
        """Test that a zero sample does not create two crossings."""
        assert zero_crossing_rate([1, 0, -1, 0, 1]) == pytest.approx(2 / 4)

    def test_tone_rate_is_twice_frequency_over_rate(self):
        """Test that a sine over whole periods crosses about 2f/fs per sample."""
        fs, n = 8000, 800
        for f in (100.0, 250.0, 1000.0):
            frame = np.sin(2 * np.pi * f * np.arange(n) / fs + 0.1)
            assert abs(zero_crossing_rate(frame) - 2 * f / fs) <= 2 / n

    def test_one_sample_raises(self):
        """Test that fewer than 2 samples is insufficient."""
        with pytest.raises(InsufficientDataError):
            zero_crossing_rate([0.3])

    def test_energy_of_zeros(self):
        """Test that silence has zero energy."""
        assert short_time_energy(np.zeros(32)) == 0.0

    def test_energy_of_constant(self):
        """Test that a constant a has energy a squared."""
        assert short_time_energy(np.full(16, -0.3)) == pytest.approx(0.09)

    def test_energy_of_sine(self):
        """Test that a sine of amplitude A has energy A^2/2 within 1%."""
        a = 0.7
        frame = a * np.sin(2 * np.pi * 5 * np.arange(1000) / 1000)

        assert short_time_energy(frame) == pytest.approx(a * a / 2, rel=0.01)

    def test_vectorized_over_frames(self, rng):
        """Test that a 2-D stack gives one value per frame."""
        frames = rng.uniform(-1, 1, (7, 40))

        np.testing.assert_allclose(short_time_energy(frames), [short_time_energy(f) for f in frames])
        np.testing.assert_allclose(zero_crossing_rate(frames), [zero_crossing_rate(f) for f in frames])

    def test_crossing_rate_ignores_positive_gain(self, rng):
        """Test that scaling a frame by g > 0 leaves its crossing rate unchanged."""
        frame = rng.normal(size=400)

        for gain in (1e-3, 0.5, 7.0):
            assert zero_crossing_rate(gain * frame) == zero_crossing_rate(frame)

    def test_energy_scales_with_gain_squared(self, rng):
        """Test that scaling a frame by g multiplies its energy by g^2."""
        frame = rng.uniform(-1, 1, 256)

        for gain in (-2.0, 0.1, 3.0):
            assert short_time_energy(gain * frame) == pytest.approx(gain * gain * short_time_energy(frame), rel=1e-12)


class TestPowerSpectrum:
    """Tests for the FFT magnitude spectrum."""

    def test_impulse_is_flat(self):
        """Test that a delta has magnitude 1 in every bin."""
        frame = np.zeros(16)
        frame[0] = 1.0

        spec = power_spectrum(frame, 16)

        np.testing.assert_allclose(spec.magnitudes, np.ones(9))

    def test_bin_centered_sine_peaks_at_its_bin(self):
        """Test that a sine at bin k's frequency peaks at bin k."""
        n, k = 64, 5
        frame = np.sin(2 * np.pi * k * np.arange(n) / n)

        spec = power_spectrum(frame, n, sample_rate=n)

        assert int(np.argmax(spec.magnitudes)) == k
        assert spec.frequencies[k] == pytest.approx(k)

    def test_matches_naive_dft(self, rng):
        """Test that FFT magnitudes match the naive DFT within 1e-9 relative error."""
        for n in (8, 16, 32, 64, 128, 256, 512, 1024):
            frame = rng.uniform(-1, 1, int(rng.integers(n // 2, n + 1)))

            fast = power_spectrum(frame, n).magnitudes
            slow = naive_dft_magnitudes(frame, n)

            scale = np.max(np.abs(slow))
            assert np.max(np.abs(fast - slow)) <= 1e-9 * scale

    def test_energy_is_preserved(self, rng):
        """Test that frame energy equals the full-spectrum energy divided by N."""
        for n in (8, 64, 512):
            frame = rng.normal(size=n)

            mags = power_spectrum(frame, n).magnitudes
            # bins 1..N/2-1 stand for their mirrored negative frequencies too
            weights = np.full(mags.size, 2.0)
            weights[[0, -1]] = 1.0

            assert np.sum(frame ** 2) == pytest.approx(np.sum(weights * mags ** 2) / n, rel=1e-6)

    def test_non_power_of_two_raises(self):
        """Test that fft size 100 is rejected."""
        with pytest.raises(InvalidSizeError):
            power_spectrum(np.zeros(64), 100)

    def test_frame_longer_than_fft_raises(self):
        """Test that the frame must fit the transform."""
        with pytest.raises(InvalidSizeError):
            power_spectrum(np.zeros(70), 64)

    def test_next_power_of_two(self):
        """Test the FFT size rule."""
        assert [next_power_of_two(n) for n in (1, 2, 3, 200, 256, 1103)] == [1, 2, 4, 256, 256, 2048]


class TestSpectralMoments:
    """Tests for spectral centroid and spread."""

    def test_single_bin(self):
        """Test that a point mass at 1000 Hz has centroid 1000 and spread 0."""
        mags = np.zeros(9)
        mags[2] = 3.0

        centroid, spread = spectral_centroid_spread(Spectrum(magnitudes=mags, bin_width=500.0))

        assert centroid == pytest.approx(1000.0)
        assert spread == pytest.approx(0.0)

    def test_two_equal_bins(self):
        """Test that equal mass at 1000 and 3000 Hz gives centroid 2000 and spread 1000."""
        mags = np.zeros(9)
        mags[[2, 6]] = 1.0

        centroid, spread = spectral_centroid_spread(Spectrum(magnitudes=mags, bin_width=500.0))

        assert centroid == pytest.approx(2000.0)
        assert spread == pytest.approx(1000.0)

    def test_matches_moment_sums(self, rng):
        """Test random spectra against direct weighted sums."""
        for _ in range(20):
            mags = rng.uniform(0, 1, 65)
            freqs = np.arange(65) * 125.0

            centroid, spread = spectral_centroid_spread(Spectrum(magnitudes=mags, bin_width=125.0))

            expected_c = sum(m * f for m, f in zip(mags, freqs)) / sum(mags)
            expected_s = np.sqrt(sum(m * (f - expected_c) ** 2 for m, f in zip(mags, freqs)) / sum(mags))
            assert abs(centroid - expected_c) <= 1e-9 * expected_c
            assert abs(spread - expected_s) <= 1e-9 * expected_s

    def test_centroid_within_occupied_bins(self, rng):
        """Test that the centroid lies between the lowest and highest non-zero bins."""
        for _ in range(50):
            mags = np.where(rng.uniform(size=33) < 0.3, rng.uniform(0.1, 2.0, 33), 0.0)
            mags[int(rng.integers(0, 33))] = 1.0
            spec = Spectrum(magnitudes=mags, bin_width=62.5)
            occupied = spec.frequencies[mags > 0]

            centroid, _ = spectral_centroid_spread(spec)

            assert occupied.min() - 1e-9 <= centroid <= occupied.max() + 1e-9

    def test_silent_spectrum_raises(self):
        """Test that an all-zero spectrum has no centroid."""
        with pytest.raises(UndefinedCentroidError):
            spectral_centroid_spread(Spectrum(magnitudes=np.zeros(9), bin_width=1.0))


class TestMfcc:
    """Tests for the mel filterbank and cepstral coefficients."""

    def test_silence_has_only_dc(self):
        """Test that floored energies give coefficient 0 = 26*log(1e-10)/sqrt(26) and zeros after."""
        spec = Spectrum(magnitudes=np.zeros(257), bin_width=44100 / 512)

        coeffs = mfcc(spec)

        assert coeffs.shape == (13,)
        assert coeffs[0] == pytest.approx(26 * np.log(1e-10) / np.sqrt(26))
        np.testing.assert_allclose(coeffs[1:], 0.0, atol=1e-9)

    def test_gain_shifts_only_coefficient_zero(self, rng):
        """Test that scaling a frame by g changes only coefficient 0."""
        frame = rng.uniform(-0.5, 0.5, 1024)
        base = mfcc(power_spectrum(frame, 1024, 16000))
        louder = mfcc(power_spectrum(1.8 * frame, 1024, 16000))

        assert louder[0] - base[0] == pytest.approx(np.sqrt(26) * np.log(1.8 ** 2), rel=1e-6)
        np.testing.assert_allclose(louder[1:], base[1:], atol=1e-6)

    def test_filterbank_matches_mel_formula(self):
        """Test the bank against filters built one at a time from the mel edges."""
        n_filters, fft_size, fs = 10, 256, 8000
        bank = mel_filterbank(n_filters, fft_size, fs)

        edges_mel = np.linspace(0, 2595 * np.log10(1 + (fs / 2) / 700), n_filters + 2)
        edges = 700 * (10 ** (edges_mel / 2595) - 1)
        freqs = np.arange(fft_size // 2 + 1) * fs / fft_size
        for m in range(n_filters):
            lo, mid, hi = edges[m], edges[m + 1], edges[m + 2]
            expected = [
                (f - lo) / (mid - lo) if lo <= f <= mid else (hi - f) / (hi - mid) if mid < f <= hi else 0.0
                for f in freqs
            ]
            np.testing.assert_allclose(bank[m], expected, atol=1e-12)

    def test_adjacent_filters_share_edges(self):
        """Test that each filter's support is contiguous and overlaps only its neighbours."""
        bank = mel_filterbank(26, 2048, 44100)
        for m, row in enumerate(bank):
            support = np.flatnonzero(row > 0)
            assert np.all(np.diff(support) == 1)
            if m + 2 < len(bank):
                assert not np.any((row > 0) & (bank[m + 2] > 0))

    def test_mel_scale_round_trip(self):
        """Test that hz_to_mel and mel_to_hz invert each other."""
        hz = np.array([0.0, 100.0, 1000.0, 8000.0])
        np.testing.assert_allclose(mel_to_hz(hz_to_mel(hz)), hz, atol=1e-9)

    def test_too_many_filters_raises(self):
        """Test that more filters than bins is a configuration error."""
        with pytest.raises(InvalidConfigurationError):
            mel_filterbank(40, 16, 8000)


class TestExtractFeatures:
    """Tests for per-window feature extraction."""

    def test_thirty_seconds_give_thirty_windows(self, make_tone):
        """Test the one-window-per-second rule."""
        clip = make_tone(440.0, rate=8000, seconds=30.0)

        windows = extract_features(clip)

        assert len(windows) == 30
        assert all(0.0 <= w.zcr <= 1.0 for w in windows)

    def test_silence_uses_sentinels(self):
        """Test that a zero clip has zero energy, zero crossings and zero moments."""
        clip = AudioClip(samples=np.zeros(16000), sample_rate=8000)

        matrix = extract_feature_matrix(clip)

        assert matrix.shape == (2, len(FEATURE_NAMES))
        np.testing.assert_array_equal(matrix[:, :4], 0.0)

    def test_tone_centroid_follows_frequency(self, make_tone):
        """Test that window centroids sit near the tone and rise with it."""
        low = extract_feature_matrix(make_tone(1000.0, rate=16000, seconds=2.0))
        high = extract_feature_matrix(make_tone(3000.0, rate=16000, seconds=2.0))

        assert np.all(np.abs(low[:, 2] - 1000.0) < 500.0)
        assert np.all(high[:, 2] > low[:, 2] + 1000.0)

    def test_short_clip_raises(self, make_tone):
        """Test that a clip shorter than one window is rejected."""
        with pytest.raises(InsufficientDataError):
            extract_feature_matrix(make_tone(440.0, rate=8000, seconds=0.5))

    def test_conversation_narrower_than_tv(self):
        """Test that a 4 kHz conversation has less spread than a TV programme."""
        conversation = synth_audio(SceneSpec(scene_class="conversation", seed=5, duration=3.0))
        tv = synth_audio(SceneSpec(scene_class="tv", seed=5, duration=3.0))

        spread_conv = extract_feature_matrix(conversation)[:, 3].mean()
        spread_tv = extract_feature_matrix(tv)[:, 3].mean()

        assert spread_conv < spread_tv

    def test_feature_dump(self, tmp_path, make_tone):
        """Test the CSV header and one row per window."""
        matrix = extract_feature_matrix(make_tone(300.0, rate=8000, seconds=3.0))
        path = tmp_path / "features.csv"

        written = write_feature_dump([("clip_a", matrix)], path)

        lines = path.read_text().splitlines()
        assert written == 3
        assert lines[0] == ",".join(("clip_id", "window") + FEATURE_NAMES)
        assert lines[1].startswith("clip_a,0,")
        assert len(lines[3].split(",")) == 2 + len(FEATURE_NAMES)

    def test_feature_dump_with_margins(self, tmp_path, make_tone):
        """Test that a margin function adds a trailing column per window."""
        matrix = extract_feature_matrix(make_tone(300.0, rate=8000, seconds=2.0))
        path = tmp_path / "features.csv"

        write_feature_dump([("clip_a", matrix)], path, margins=lambda m: m[:, 0] * 2.0)

        header, first, _ = path.read_text().splitlines()
        assert header.endswith(",margin")
        cells = first.split(",")
        assert float(cells[-1]) == pytest.approx(2.0 * float(cells[2]))
