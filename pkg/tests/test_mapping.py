import math

import numpy as np
import pytest

from sonigame.mapping import (DimensionMap, LinearCurve, LogCurve, MappingError, MappingSpec,
                              Pose, ProximityWarp, RangeError, RestValues,
                              attributes_to_position, default_game_spec, local_to_world,
                              ping_schedule, position_to_attributes, validate_spec,
                              world_to_local)

from oracles import rotate_to_local

TAU = 2.0 * math.pi


def random_specs(rng, count):
    """Valid random specs mixing frames, attribute assignments, and curves."""
    specs = []
    attr_ranges = {"pitch": (110.0, 3520.0), "amplitude": (0.0, 1.0),
                   "timbre": (0.0, 1.0), "waveshape": (0.0, 1.0), "pan": (-1.0, 1.0)}
    frames = ["global-cartesian", "local-cartesian", "local-polar"]
    while len(specs) < count:
        frame = frames[rng.integers(0, 3)]
        dims = ("x", "y") if frame != "local-polar" else ("range", "bearing")
        attrs = list(rng.choice(list(attr_ranges), size=2, replace=False))
        entries = []
        for dim, attr in zip(dims, attrs):
            b_lo, b_hi = attr_ranges[attr]
            lo = rng.uniform(b_lo, b_lo + 0.4 * (b_hi - b_lo))
            hi = rng.uniform(b_hi - 0.4 * (b_hi - b_lo), b_hi)
            if dim == "range":
                in_range = (0.0, float(rng.uniform(10.0, 100.0)))
                curve = ProximityWarp(r0=float(rng.uniform(1.0, 10.0)))
            else:
                in_range = (float(rng.uniform(-10.0, 0.0)), float(rng.uniform(0.5, 10.0)))
                if attr == "pitch" and lo > 0:
                    curve = LogCurve()
                else:
                    curve = LinearCurve()
            entries.append(DimensionMap(dim, attr, in_range, (float(lo), float(hi)), curve))
        spec = MappingSpec(frame=frame, dims=tuple(entries))
        if not validate_spec(spec):
            specs.append(spec)
    return specs


class TestFrames:
    def test_identity_frame(self):
        player = Pose(0.0, 0.0, math.pi / 2.0)  # facing +y
        assert world_to_local(player, (3.0, 4.0)) == pytest.approx((3.0, 4.0), abs=1e-12)

    def test_pure_translation(self):
        player = Pose(5.0, 5.0, math.pi / 2.0)
        lx, ly = world_to_local(player, (5.0, 6.0))
        assert (lx, ly) == pytest.approx((0.0, 1.0), abs=1e-12)

    def test_rotation_against_matrix_oracle(self):
        player = Pose(0.0, 0.0, 0.0)  # facing +x
        assert world_to_local(player, (1.0, 0.0)) == pytest.approx((0.0, 1.0), abs=1e-12)
        rng = np.random.default_rng(5)
        for _ in range(200):
            pose = Pose(*rng.uniform(-50.0, 50.0, 2), float(rng.uniform(-10.0, 10.0)))
            obj = tuple(rng.uniform(-50.0, 50.0, 2))
            expected = rotate_to_local(pose.x, pose.y, pose.heading, *obj)
            assert world_to_local(pose, obj) == pytest.approx(expected, abs=1e-9)

    def test_local_to_world_inverts(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            pose = Pose(*rng.uniform(-100.0, 100.0, 2), float(rng.uniform(-7.0, 7.0)))
            pt = tuple(rng.uniform(-100.0, 100.0, 2))
            back = world_to_local(pose, local_to_world(pose, pt))
            assert math.hypot(back[0] - pt[0], back[1] - pt[1]) <= 1e-9

    def test_identity_pose_roundtrip(self):
        pose = Pose(0.0, 0.0, math.pi / 2.0)
        assert local_to_world(pose, (3.0, 4.0)) == pytest.approx((3.0, 4.0))
        pose_x = Pose(0.0, 0.0, 0.0)
        assert local_to_world(pose_x, (0.0, 1.0)) == pytest.approx((1.0, 0.0), abs=1e-12)

    def test_distances_preserved(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            pose = Pose(*rng.uniform(-20.0, 20.0, 2), float(rng.uniform(-4.0, 4.0)))
            a = tuple(rng.uniform(-20.0, 20.0, 2))
            b = tuple(rng.uniform(-20.0, 20.0, 2))
            la = world_to_local(pose, a)
            lb = world_to_local(pose, b)
            d_world = math.dist(a, b)
            d_local = math.dist(la, lb)
            assert d_local == pytest.approx(d_world, abs=1e-9)

    def test_non_finite_rejected(self):
        with pytest.raises(MappingError):
            world_to_local(Pose(0.0, 0.0, 0.0), (math.nan, 0.0))
        with pytest.raises(MappingError):
            Pose(math.inf, 0.0, 0.0)


class TestPositionMapping:
    def test_default_spec_midpoint(self):
        frame = position_to_attributes(default_game_spec(), (0.5, 0.5))
        assert frame.waveshape == pytest.approx(0.5, abs=1e-12)
        # geometric midpoint of 220..880 is exactly 440
        assert frame.pitch_hz == pytest.approx(math.sqrt(220.0 * 880.0), abs=1e-9)
        assert frame.pitch_hz == pytest.approx(440.0, abs=1e-9)

    def test_default_spec_endpoints(self):
        low = position_to_attributes(default_game_spec(), (0.0, 0.0))
        assert (low.waveshape, low.pitch_hz) == (0.0, 220.0)
        high = position_to_attributes(default_game_spec(), (1.0, 1.0))
        assert high.waveshape == 1.0
        assert high.pitch_hz == pytest.approx(880.0, abs=1e-9)

    def test_rest_values_fill_unmapped(self):
        frame = position_to_attributes(default_game_spec(), (0.2, 0.7))
        rest = RestValues()
        assert frame.amplitude == rest.amplitude
        assert frame.timbre == rest.timbre
        assert frame.pan is None

    def test_inverse_midpoint(self):
        spec = default_game_spec()
        frame = position_to_attributes(spec, (0.5, 0.5))
        assert attributes_to_position(spec, frame) == pytest.approx((0.5, 0.5), abs=1e-9)

    def test_endpoints_invert_to_endpoints(self):
        spec = default_game_spec()
        for pos in [(0.0, 0.0), (1.0, 1.0), (0.0, 1.0)]:
            back = attributes_to_position(spec, position_to_attributes(spec, pos))
            assert back == pytest.approx(pos, abs=1e-9)

    def test_random_round_trips(self):
        rng = np.random.default_rng(8)
        for spec in random_specs(rng, 5):
            in_ranges = [dm.input_range for dm in spec.dims]
            # order input ranges canonically per frame dimension order
            by_dim = {dm.dimension: dm.input_range for dm in spec.dims}
            dims = ("x", "y") if spec.frame != "local-polar" else ("range", "bearing")
            for _ in range(2000):
                pos = tuple(float(rng.uniform(*by_dim[d])) for d in dims)
                frame = position_to_attributes(spec, pos)
                back = attributes_to_position(spec, frame)
                for d, (got, want) in zip(dims, zip(back, pos)):
                    lo, hi = by_dim[d]
                    assert abs(got - want) <= 1e-6 * (hi - lo)

    def test_monotone_per_dimension(self):
        spec = default_game_spec()
        xs = np.linspace(0.0, 1.0, 25)
        waves = [position_to_attributes(spec, (float(x), 0.5)).waveshape for x in xs]
        pitches = [position_to_attributes(spec, (0.5, float(y))).pitch_hz for y in xs]
        assert all(b > a for a, b in zip(waves, waves[1:]))
        assert all(b > a for a, b in zip(pitches, pitches[1:]))

    def test_clamping_and_strict(self):
        spec = default_game_spec()
        frame = position_to_attributes(spec, (1.5, -0.2))
        assert frame.clamped
        assert frame.waveshape == 1.0
        assert frame.pitch_hz == 220.0
        with pytest.raises(RangeError):
            position_to_attributes(spec, (1.5, 0.5), strict=True)

    def test_attribute_outside_output_range_rejected(self):
        spec = default_game_spec()
        frame = position_to_attributes(spec, (0.5, 0.5))
        bad = type(frame)(t=0.0, pitch_hz=1000.0, amplitude=frame.amplitude,
                          timbre=frame.timbre, waveshape=frame.waveshape)
        with pytest.raises(RangeError):
            attributes_to_position(spec, bad)

    def test_proximity_warp_resolution_concentrates_near_player(self):
        dm = DimensionMap("range", "amplitude", (0.0, 50.0), (0.0, 1.0), ProximityWarp(5.0))
        ds = np.linspace(0.0, 49.0, 50)
        h = 1e-4
        derivs = [abs(dm.forward(d + h) - dm.forward(d)) / h for d in ds]
        assert all(b < a for a, b in zip(derivs, derivs[1:]))

    def test_proximity_warp_round_trip(self):
        dm = DimensionMap("range", "timbre", (0.0, 40.0), (0.0, 1.0), ProximityWarp(3.0))
        for d in np.linspace(0.0, 40.0, 41):
            assert dm.backward(dm.forward(float(d))) == pytest.approx(float(d), abs=1e-8)


class TestColocationInvariance:
    def test_local_origin_identical_tuple_across_poses(self):
        spec = MappingSpec(
            frame="local-cartesian",
            dims=(DimensionMap("x", "timbre", (-20.0, 20.0), (0.0, 1.0)),
                  DimensionMap("y", "waveshape", (-20.0, 20.0), (0.0, 1.0))))
        rng = np.random.default_rng(9)
        reference = None
        for _ in range(1000):
            pose = Pose(*rng.uniform(-100.0, 100.0, 2), float(rng.uniform(-7.0, 7.0)))
            obj = (pose.x, pose.y)  # co-located
            local = world_to_local(pose, obj)
            frame = position_to_attributes(spec, local)
            tup = (frame.pitch_hz, frame.amplitude, frame.timbre, frame.waveshape, frame.pan)
            if reference is None:
                reference = tup
            assert tup == reference  # bit-exact

    def test_ten_meters_ahead_pose_independent(self):
        spec = MappingSpec(
            frame="local-cartesian",
            dims=(DimensionMap("x", "timbre", (-20.0, 20.0), (0.0, 1.0)),
                  DimensionMap("y", "pitch", (-20.0, 20.0), (110.0, 880.0), LogCurve())))
        rng = np.random.default_rng(10)
        reference = position_to_attributes(spec, (0.0, 10.0))
        for _ in range(500):
            pose = Pose(*rng.uniform(-100.0, 100.0, 2), float(rng.uniform(-7.0, 7.0)))
            world_point = local_to_world(pose, (0.0, 10.0))
            local = world_to_local(pose, world_point)
            frame = position_to_attributes(spec, local)
            assert frame.pitch_hz == pytest.approx(reference.pitch_hz, abs=1e-9)
            assert frame.timbre == pytest.approx(reference.timbre, abs=1e-9)


class TestValidateSpec:
    def test_default_ok(self):
        assert validate_spec(default_game_spec()) == []

    def test_attribute_reuse_reported(self):
        spec = MappingSpec(
            frame="global-cartesian",
            dims=(DimensionMap("x", "pitch", (0.0, 1.0), (220.0, 880.0), LogCurve()),
                  DimensionMap("y", "pitch", (0.0, 1.0), (220.0, 880.0), LogCurve())))
        problems = validate_spec(spec)
        assert any("attribute reused" in p for p in problems)

    def test_unhoused_dimension_reported(self):
        spec = MappingSpec(
            frame="global-cartesian",
            dims=(DimensionMap("x", "waveshape", (0.0, 1.0), (0.0, 1.0)),))
        problems = validate_spec(spec)
        assert any("unhoused" in p and "'y'" in p for p in problems)

    def test_degenerate_range_reported(self):
        spec = MappingSpec(
            frame="global-cartesian",
            dims=(DimensionMap("x", "waveshape", (1.0, 1.0), (0.0, 1.0)),
                  DimensionMap("y", "pitch", (0.0, 1.0), (220.0, 880.0), LogCurve())))
        assert any("degenerate input range" in p for p in validate_spec(spec))

    def test_log_curve_needs_positive_output(self):
        spec = MappingSpec(
            frame="global-cartesian",
            dims=(DimensionMap("x", "pan", (0.0, 1.0), (-1.0, 1.0), LogCurve()),
                  DimensionMap("y", "pitch", (0.0, 1.0), (220.0, 880.0), LogCurve())))
        assert any("log curve" in p for p in validate_spec(spec))

    def test_wrong_frame_dimension_reported(self):
        spec = MappingSpec(
            frame="global-cartesian",
            dims=(DimensionMap("bearing", "waveshape", (0.0, TAU), (0.0, 1.0)),
                  DimensionMap("y", "pitch", (0.0, 1.0), (220.0, 880.0), LogCurve())))
        assert any("not part of frame" in p for p in validate_spec(spec))


class TestPingSchedule:
    PLAYER = Pose(2.0, 3.0, math.pi / 2.0)  # facing +y

    def test_dead_ahead_offset_zero(self):
        sched = ping_schedule(self.PLAYER, [(2.0, 8.0)], 2.0)
        assert sched.pings[0].offset_s == 0.0

    def test_due_right_quarter_period(self):
        sched = ping_schedule(self.PLAYER, [(7.0, 3.0)], 2.0)
        assert sched.pings[0].offset_s == pytest.approx(0.5, abs=1e-12)

    def test_dead_behind_half_period(self):
        sched = ping_schedule(self.PLAYER, [(2.0, -4.0)], 2.0)
        assert sched.pings[0].offset_s == pytest.approx(1.0, abs=1e-12)

    def test_behind_zero_angle_option(self):
        sched = ping_schedule(self.PLAYER, [(2.0, -4.0)], 2.0, zero_angle="behind")
        assert sched.pings[0].offset_s == pytest.approx(0.0, abs=1e-12)

    def test_coincident_object(self):
        sched = ping_schedule(self.PLAYER, [(2.0, 3.0)], 2.0)
        ping = sched.pings[0]
        assert ping.offset_s == 0.0
        assert ping.range_m == 0.0
        assert ping.frame.timbre == 1.0  # proximity 1 at range 0

    def test_range_encoded_on_chosen_attribute(self):
        sched = ping_schedule(self.PLAYER, [(2.0, 8.0)], 2.0,
                              range_attribute="pitch", r0=5.0)
        # proximity = 5/(5+5) = 0.5 -> midway through [220, 880]
        assert sched.pings[0].frame.pitch_hz == pytest.approx(550.0, abs=1e-9)

    def test_offsets_sorted(self):
        rng = np.random.default_rng(11)
        objects = [tuple(rng.uniform(-10.0, 10.0, 2)) for _ in range(20)]
        sched = ping_schedule(self.PLAYER, objects, 2.0)
        offsets = [p.offset_s for p in sched.pings]
        assert offsets == sorted(offsets)

    def test_offsets_always_inside_sweep_period(self):
        rng = np.random.default_rng(14)
        period = 2.0
        for _ in range(200):
            player = Pose(*rng.uniform(-50.0, 50.0, 2), float(rng.uniform(-7.0, 7.0)))
            objects = [tuple(rng.uniform(-50.0, 50.0, 2)) for _ in range(5)]
            for ping in ping_schedule(player, objects, period).pings:
                assert 0.0 <= ping.offset_s < period
                assert 0.0 <= ping.bearing_rad < TAU

    def test_translation_invariance(self):
        rng = np.random.default_rng(12)
        objects = [tuple(rng.uniform(-10.0, 10.0, 2)) for _ in range(10)]
        base = ping_schedule(self.PLAYER, objects, 2.0)
        shift = (17.0, -4.0)
        moved_player = Pose(self.PLAYER.x + shift[0], self.PLAYER.y + shift[1],
                            self.PLAYER.heading)
        moved_objects = [(x + shift[0], y + shift[1]) for x, y in objects]
        moved = ping_schedule(moved_player, moved_objects, 2.0)
        for a, b in zip(base.pings, moved.pings):
            assert b.offset_s == pytest.approx(a.offset_s, abs=1e-9)

    def test_rotation_equivariance(self):
        rng = np.random.default_rng(13)
        objects = [tuple(rng.uniform(-10.0, 10.0, 2)) for _ in range(5)]
        period = 2.0
        base = ping_schedule(self.PLAYER, objects, period)
        base_by_index = {p.object_index: p.offset_s for p in base.pings}
        for _ in range(200):
            phi = float(rng.uniform(-math.pi, math.pi))
            rotated = Pose(self.PLAYER.x, self.PLAYER.y, self.PLAYER.heading + phi)
            sched = ping_schedule(rotated, objects, period)
            for ping in sched.pings:
                expected = (base_by_index[ping.object_index] + phi / TAU * period) % period
                delta = abs(ping.offset_s - expected)
                delta = min(delta, period - delta)
                assert delta <= 1e-9

    def test_bad_inputs(self):
        with pytest.raises(MappingError):
            ping_schedule(self.PLAYER, [], 0.0)
        with pytest.raises(MappingError):
            ping_schedule(self.PLAYER, [], 2.0, range_attribute="pan")
