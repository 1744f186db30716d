"""Smoke test of the leopnt extension module.

Build and install first, for example:

    maturin build --release -m crates/py/Cargo.toml
    pip install target/wheels/leopnt-*.whl
"""

import math

import leopnt

C = 299792458.0


def main():
    foc = leopnt.Constellation.nominal("pulsar-foc")
    assert len(foc) == 258, len(foc)
    assert sorted(foc.shells) == ["inclined", "polar"]
    back = leopnt.Constellation.from_document(foc.to_document())
    assert len(back) == len(foc)

    # observables against the positions of the same epoch
    visible = foc.observe(45.0, 600.0)
    assert visible, "no satellite above the horizon"
    for o in visible:
        assert 0.0 <= o.elevation <= 90.0
        assert abs(o.doppler("x1") + o.range_rate * 1593.3225e6 / C) < 1e-6

    fp = leopnt.footprint_radius(6371e3 + 1080e3) / 1e3
    assert abs(fp - 3864) < 1.0, fp
    assert abs(leopnt.fspl_delta_db(25788e3, 3900.7e3) - 16.4) < 0.05

    # a small sweep and its report tables
    iov = leopnt.Constellation.nominal("pulsar-iov")
    sweep = leopnt.run_sweep(iov, [0.0, 45.0], duration_days=0.5, step_s=10.0, pair_step_s=10.0)
    rows = sweep.table("range_m")
    assert len(rows) == 2 * 5
    md = leopnt.report([4, 5], [sweep.stats_csv()])
    assert "Minimum range" in md

    # code families
    kasami = leopnt.kasami_small_set()
    assert len(kasami) == 32 and all(len(c) == 1023 for c in kasami)
    auto, cross = leopnt.family_correlation(kasami)
    assert max(auto, cross) == 33
    r = leopnt.circular_correlation(kasami[0], kasami[0])
    assert r[0] == 1023 and max(abs(v) for v in r[1:]) == 1

    # CSK roundtrip
    prn = leopnt.x5_code("0101011100100")
    for s in (0, 1, 128, 255):
        rx = [float(c) for c in leopnt.csk_modulate(prn, s)]
        assert leopnt.csk_demodulate(rx, prn)[0] == s
        assert leopnt.csk_demodulate(rx, prn, fft=True)[0] == s

    # planner
    plan = leopnt.plan_doppler("cold", "x1", "inclined", 500.0)
    centers = [b[0] for b in plan.bins]
    assert abs(centers[0] - 31813.4) / 31813.4 < 0.003
    assert all(a > b for a, b in zip(centers, centers[1:]))
    assert plan.rank_of(centers[0]) == 0
    cit = leopnt.max_coherent_integration(230.0, 1.0)
    assert math.isclose(cit, math.sqrt(1.0 / 460.0))
    assert len(leopnt.overlay_delays(mask=0.0)) == 19

    try:
        leopnt.Constellation.nominal("no-such")
    except leopnt.LeopntError:
        pass
    else:
        raise AssertionError("expected LeopntError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
