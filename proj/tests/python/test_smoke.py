import math

import pytest

import plateau_lab as pl


def circle(segments=128, radius=1.0):
    return [
        [radius * math.cos(2 * math.pi * k / segments), radius * math.sin(2 * math.pi * k / segments)]
        for k in range(segments)
    ]


def test_seminorm_constants():
    linf = pl.Seminorm([[1, 0], [0, 1]], pl.Norm.linf())
    assert linf.q_factor() == pytest.approx(math.sqrt(2))
    assert linf.i_plus() == pytest.approx(1.0)
    assert linf.i_avg() == pytest.approx((math.pi + 2) / math.pi)

    euclid = pl.Seminorm([[1, 0], [0, 1]])
    assert euclid(3, 4) == pytest.approx(5.0)
    assert euclid.i_avg() == pytest.approx(2.0)

    stretched = euclid.compose([[2, 0], [0, 0.5]])
    assert stretched.i_plus() == pytest.approx(4.0)


def test_volume_tables():
    linf = pl.Seminorm([[1, 0], [0, 1]], pl.Norm.linf())
    assert pl.jacobian(pl.Volume.busemann, linf) == pytest.approx(math.pi / 4)
    assert pl.jacobian(pl.Volume.holmes_thompson, linf) == pytest.approx(2 / math.pi)
    assert pl.jacobian(pl.Volume.mass_star, linf) == pytest.approx(1.0)
    assert pl.norm_constant(pl.Volume.inscribed_ellipse, pl.Norm.l1()) == pytest.approx(2.0, abs=1e-6)


def test_mesh_and_map():
    mesh = pl.make_disc_mesh(3)
    assert mesh.num_triangles == 8 * 4**3
    assert mesh.total_area() == pytest.approx(math.pi, rel=0.03)

    images = []
    off = mesh.to_off()
    mesh2 = pl.read_off(off)
    assert mesh2.num_vertices == mesh.num_vertices

    target = pl.Target.euclidean(2)
    for line in off.splitlines()[3 : 3 + mesh.num_vertices]:
        x, y, _ = (float(v) for v in line.split())
        images.extend([x, y])
    u = pl.PLMap(mesh, target, images)
    assert u.energy_ks() == pytest.approx(2 * u.energy_plus(), rel=1e-12)
    assert u.area(pl.Volume.busemann) == pytest.approx(mesh.total_area(), rel=1e-12)
    assert u.qc_report().max_q == pytest.approx(1.0)
    assert u.courant_lebesgue(0.0, 0.0, 0.01).passed

    round_trip = pl.map_from_json(u.to_json())
    assert round_trip.energy_plus() == pytest.approx(u.energy_plus(), rel=1e-14)
    assert "<svg" in u.to_svg()


def test_small_solve():
    target = pl.Target.euclidean(2)
    boundary = pl.JordanBoundary(target, circle())
    problem = pl.Problem(target, boundary, level=3, functional=pl.Functional.energy_plus)
    result = pl.minimize_energy(problem, pl.SolverConfig())
    assert result.energy_plus == pytest.approx(math.pi, rel=0.01)
    assert result.qc.max_q <= 1.05
    assert result.area(pl.Volume.busemann) == pytest.approx(math.pi, rel=0.01)

    variation = pl.variation_test(result.map, 0.0, 0.0, 0.3, [[1.25, 0], [0, 0.8]])
    assert variation.delta_energy_plus >= -1e-4 * result.energy_plus
    assert variation.injective


def test_fill_and_bidisc():
    linf = pl.Target.normed_plane(pl.Norm.linf())
    square = pl.JordanBoundary(linf, [[1, -1], [1, 1], [-1, 1], [-1, -1]])
    fill = pl.fill_injective(square, 4)
    bound = square.length**2 / (2 * math.pi)
    for volume in (pl.Volume.busemann, pl.Volume.mass_star):
        assert fill.area(volume) <= 1.05 * bound

    report = pl.bi_disc_scenario(pl.Norm.linf(), 0.95, pl.Volume.busemann, pl.Volume.mass_star, 5)
    assert report.argmins_differ
    assert report.area_mu_u1 == pytest.approx(math.pi**2 / 4, abs=1e-3)


def test_scenario_runner(tmp_path):
    artifact = pl.run_scenario("volume-scaling", out_dir=str(tmp_path))
    assert artifact.passed
    assert any(row.name == "scaling-equivariance" for row in artifact.assertions)
    assert (tmp_path / "volume-scaling" / "result.json").exists()


def test_errors():
    with pytest.raises(pl.PlateauError):
        pl.bi_disc_scenario(pl.Norm.linf(), 0.1, pl.Volume.busemann, pl.Volume.mass_star, 3)
