"""Adaptive thresholding, binarization, and connected-component extraction."""

import numpy as np
import pytest

from mflscan.enhance import FusedImage
from mflscan.localize import (
    adaptive_threshold,
    binarize,
    extract_components,
)


def fused(pixels):
    return FusedImage(pixels=np.asarray(pixels, dtype=float),
                      weights_used=(1.0, 0.0, 0.0))


class TestAdaptiveThreshold:
    def test_two_clean_blobs_whole_sweep_plateau(self):
        img = np.zeros((20, 20))
        img[2:5, 2:5] = 1.0
        img[12:15, 12:15] = 1.0
        scan = adaptive_threshold(fused(img))
        assert set(scan.region_counts) == {2}
        assert scan.chosen_threshold == pytest.approx(0.5)

    def test_all_zero_image_sentinel(self):
        scan = adaptive_threshold(fused(np.zeros((10, 10))))
        assert scan.thresholds == ()
        assert scan.chosen_threshold == 1.0

    def test_blob_over_speckle(self):
        rng = np.random.default_rng(0)
        img = rng.uniform(0, 0.22, size=(30, 30))
        img[24, 7] = 0.22  # pin speckle peak so the clean plateau starts at 0.25
        img[10:14, 10:14] = 1.0
        scan = adaptive_threshold(fused(img))
        assert scan.chosen_threshold == pytest.approx(0.6)
        idx = scan.thresholds.index(0.6)
        assert scan.region_counts[idx] == 1

    def test_ties_break_toward_higher_plateau(self):
        # counts run 3 (t=0.05), 2 (0.10-0.50), 1 (0.55-0.95): the two
        # nine-step plateaus tie and the higher one wins
        img = np.zeros((20, 20))
        img[2:5, 2:5] = 1.0
        img[12:15, 12:15] = 0.5
        img[17, 2] = 0.05
        scan = adaptive_threshold(fused(img))
        counts = np.array(scan.region_counts)
        assert counts[scan.thresholds.index(0.05)] == 3
        assert counts[scan.thresholds.index(0.3)] == 2
        assert counts[scan.thresholds.index(0.7)] == 1
        assert scan.chosen_threshold == pytest.approx(0.75)

    def test_thresholds_strictly_increasing(self):
        img = np.zeros((10, 10))
        img[4, 4] = 1.0
        scan = adaptive_threshold(fused(img))
        assert np.all(np.diff(scan.thresholds) > 0)
        assert len(scan.thresholds) == len(scan.region_counts)


class TestBinarize:
    def test_boundary_one_keeps_only_max(self):
        img = np.array([[0.2, 1.0], [0.5, 0.3]])
        out = binarize(fused(img), 1.0)
        assert out.sum() == 1
        assert out[0, 1] == 1

    def test_near_zero_keeps_every_nonzero(self):
        img = np.array([[0.0, 0.1], [0.5, 0.0]])
        out = binarize(fused(img), 1e-9)
        assert out.sum() == 2

    def test_center_pixel_fixture(self):
        img = np.full((3, 3), 0.1)
        img[1, 1] = 0.8
        out = binarize(fused(img), 0.5)
        assert out.sum() == 1
        assert out[1, 1] == 1

    def test_pixel_count_monotone_in_threshold(self):
        rng = np.random.default_rng(1)
        img = rng.uniform(0, 1, size=(25, 25))
        counts = [int(binarize(fused(img), t).sum()) for t in np.arange(0.05, 1.0, 0.05)]
        assert np.all(np.diff(counts) <= 0)

    def test_rejects_out_of_range_threshold(self):
        with pytest.raises(ValueError):
            binarize(fused(np.ones((2, 2))), 0.0)
        with pytest.raises(ValueError):
            binarize(fused(np.ones((2, 2))), 1.5)


class TestExtractComponents:
    def test_diagonal_pixels_are_one_component(self):
        binary = np.zeros((6, 6), dtype=np.uint8)
        binary[2, 2] = binary[3, 3] = binary[2, 3] = binary[3, 2] = 1
        dets = extract_components(binary, min_area_px=4)
        assert len(dets) == 1

    def test_empty_binary_gives_no_detections(self):
        assert extract_components(np.zeros((10, 10), dtype=np.uint8)) == []

    def test_two_blocks_boxes(self):
        binary = np.zeros((50, 50), dtype=np.uint8)
        binary[10:13, 10:13] = 1
        binary[40:43, 40:43] = 1
        dets = extract_components(binary, min_area_px=4)
        assert len(dets) == 2
        assert dets[0].box == (10, 12, 10, 12)
        assert dets[1].box == (40, 42, 40, 42)

    def test_min_area_filter(self):
        binary = np.zeros((10, 10), dtype=np.uint8)
        binary[1, 1] = 1  # single pixel, below min area
        binary[5:8, 5:8] = 1
        dets = extract_components(binary, min_area_px=4)
        assert len(dets) == 1
        assert dets[0].box == (5, 7, 5, 7)

    def test_score_is_component_mean_intensity(self):
        binary = np.zeros((10, 10), dtype=np.uint8)
        binary[2:4, 2:4] = 1
        intensity = np.zeros((10, 10))
        intensity[2:4, 2:4] = [[0.4, 0.6], [0.8, 1.0]]
        dets = extract_components(binary, intensity, min_area_px=4)
        assert dets[0].score == pytest.approx(0.7)

    def test_radial_wrap_merges_seam_component(self):
        # one blob straddling the top/bottom seam of the circular radial axis
        binary = np.zeros((20, 20), dtype=np.uint8)
        binary[0:2, 8:12] = 1
        binary[18:20, 8:12] = 1
        assert len(extract_components(binary, min_area_px=4)) == 2
        merged = extract_components(binary, min_area_px=4, radial_wrap=True)
        assert len(merged) == 1

    def test_physical_coordinates(self):
        binary = np.zeros((10, 30), dtype=np.uint8)
        binary[4:6, 10:14] = 1
        dets = extract_components(
            binary, min_area_px=4, origin_sample=200, f_spatial=100.0
        )
        det = dets[0]
        assert det.axial_start_m == pytest.approx((200 + 10) / 100.0)
        assert det.axial_end_m == pytest.approx((200 + 14) / 100.0)
        assert det.axial_position_m == pytest.approx((det.axial_start_m + det.axial_end_m) / 2)

    def test_sorted_by_axial_start(self):
        binary = np.zeros((10, 40), dtype=np.uint8)
        binary[2:5, 30:33] = 1
        binary[2:5, 5:8] = 1
        dets = extract_components(binary, min_area_px=4)
        assert [d.box[0] for d in dets] == [5, 30]
