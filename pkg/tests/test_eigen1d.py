"""Kernel checks: assembly against dense Simpson, eigenvalues against Jacobi
rotations and closed forms, Richardson order, traces, and failure modes."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from proxspec.eigen1d import (
    AssemblyError,
    ConvergenceError,
    EigenPair,
    Pencil,
    WeightedForm,
    assemble,
    boundary_traces,
    converge,
    make_grid,
    smallest_eigs,
)


def harmonic_form(center, robin=None):
    return WeightedForm(
        p=lambda t: np.ones_like(t),
        q=lambda t: (t - center) ** 2,
        robin_left=robin,
        robin_right=robin,
    )


# ---------------------------------------------------------------------------
# grids


def test_make_grid_plain_interval():
    g = make_grid(1.0, 3.0, 10)
    assert g.n == 10
    assert g.zero_index is None
    np.testing.assert_allclose(g.nodes, np.linspace(1.0, 3.0, 11), atol=1e-15)


@given(
    t_min=st.floats(-37.0, -0.05),
    t_max=st.floats(0.07, 41.0),
    n=st.integers(8, 512),
)
@settings(max_examples=80, deadline=None)
def test_make_grid_snaps_a_node_onto_zero(t_min, t_max, n):
    g = make_grid(t_min, t_max, n)
    k = g.zero_index
    assert k is not None
    assert g.nodes[k] == 0.0  # exact, not approximate
    # the right end and the cell count survive the snap
    assert g.nodes[-1] == pytest.approx(t_max, abs=1e-12 * max(1.0, abs(t_max)))
    assert abs(g.n - n) <= 1


def test_make_grid_rejects_empty_interval():
    with pytest.raises(AssemblyError):
        make_grid(2.0, 2.0, 8)
    with pytest.raises(AssemblyError):
        make_grid(3.0, 1.0, 8)


def test_grid_needs_two_cells():
    with pytest.raises(AssemblyError):
        make_grid(0.0, 1.0, 1)


# ---------------------------------------------------------------------------
# assembly


def test_assembly_matches_dense_simpson_oracle():
    # Degree-2 coefficients with a genuine jump at t = 0, one Robin end and
    # one Dirichlet end; the 3-point Gauss rule is exact for this data, the
    # oracle's 32-slice composite Simpson is converged well past 1e-12.
    grid = make_grid(-1.5, 2.0, 64)

    form = WeightedForm(
        p=lambda t: (2.0 + 0.25 * t * t) * np.where(t >= 0, 1.0, 1.0 / 3.0),
        q=lambda t: (t - 0.4) ** 2 * np.where(t >= 0, 1.0, 0.5) - 0.3,
        mass_weight=lambda t: (1.0 + 0.1 * t) * np.where(t >= 0, 1.0, 2.0),
        robin_left=0.7,
        robin_right=None,
    )

    def p_of(t, side):
        return (2.0 + 0.25 * t * t) * (1.0 if side > 0 else 1.0 / 3.0)

    def q_of(t, side):
        return (t - 0.4) ** 2 * (1.0 if side > 0 else 0.5) - 0.3

    def w_of(t, side):
        return (1.0 + 0.1 * t) * (1.0 if side > 0 else 2.0)

    pencil = assemble(form, grid)
    kmat, mvec = oracles.simpson_dense_form(
        p_of, q_of, w_of, grid.nodes, robin_left=0.7, robin_right=None
    )

    assert pencil.offset == 0
    np.testing.assert_allclose(pencil.stiff_diag, np.diag(kmat), rtol=1e-10, atol=1e-11)
    np.testing.assert_allclose(pencil.stiff_off, np.diag(kmat, 1), rtol=1e-10, atol=1e-11)
    np.testing.assert_allclose(pencil.mass_diag, mvec, rtol=1e-10, atol=1e-13)


def test_assembly_rejects_bad_coefficients():
    grid = make_grid(0.0, 1.0, 16)
    flat = lambda t: np.ones_like(t)
    with pytest.raises(AssemblyError, match="kinetic weight"):
        assemble(WeightedForm(p=lambda t: 0.0 * t, q=flat), grid)
    with pytest.raises(AssemblyError, match="mass weight"):
        assemble(WeightedForm(p=flat, q=flat, mass_weight=lambda t: -flat(t)), grid)
    with pytest.raises(AssemblyError, match="quadrature"):
        assemble(WeightedForm(p=flat, q=flat), grid, quadrature="midpoint")


# ---------------------------------------------------------------------------
# eigenvalues


def test_random_pencils_match_jacobi_rotations():
    rng = np.random.default_rng(20240817)
    for _ in range(25):
        n = int(rng.integers(5, 40))
        d = rng.normal(size=n) * 3.0
        e = rng.normal(size=n - 1)
        mass = rng.uniform(0.5, 2.0, size=n)
        pencil = Pencil(d, e, mass, offset=0)
        got = [p.value for p in smallest_eigs(pencil, k=3, tol=1e-13, n_nodes=n)]
        dense = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
        want = oracles.jacobi_eigenvalues(dense, mass=mass)[:3]
        np.testing.assert_allclose(got, want, rtol=0, atol=1e-11)


def test_dirichlet_laplacian_closed_form():
    # -u'' on (0, pi): eigenvalues k^2.  Lumped-mass P1 gives the classical
    # (2 - 2 cos k h)/h^2 values; Richardson across two grids restores k^2.
    vals = {}
    for n in (512, 1024):
        grid = make_grid(0.0, np.pi, n)
        pencil = assemble(WeightedForm(p=lambda t: np.ones_like(t), q=lambda t: 0.0 * t), grid)
        vals[n] = np.array([p.value for p in smallest_eigs(pencil, k=3, tol=1e-12, n_nodes=n + 1)])
        h = grid.h
        k = np.arange(1, 4)
        np.testing.assert_allclose(vals[n], (2.0 - 2.0 * np.cos(k * h)) / h**2, rtol=1e-9)
    extrap = (4.0 * vals[1024] - vals[512]) / 3.0
    np.testing.assert_allclose(extrap, [1.0, 4.0, 9.0], rtol=1e-7)


def test_neumann_oscillator_is_second_order():
    # Ground energy of -u'' + (t-c)^2 centered deep inside the window is
    # exactly 1; the discrete error must shrink by ~4x per grid doubling.
    form = harmonic_form(0.76, robin=0.0)
    errs = []
    for n in (128, 256, 512, 1024):
        grid = make_grid(0.76 - 8.0, 0.76 + 8.0, n)
        val = smallest_eigs(assemble(form, grid), tol=1e-12, n_nodes=n + 1)[0].value
        errs.append(abs(val - 1.0))
    ratios = [errs[i] / errs[i + 1] for i in range(3)]
    assert all(3.2 < r < 4.8 for r in ratios), ratios


def test_dirichlet_window_growth_is_monotone():
    # Dirichlet truncation overestimates, so widening the window can only
    # lower the ground eigenvalue (this is what converge's growth phase
    # relies on).
    form = harmonic_form(0.0)
    vals = []
    for half in (1.5, 2.0, 2.5, 3.0):
        n = int(1024 * half)
        grid = make_grid(-half, half, n)
        vals.append(smallest_eigs(assemble(form, grid), tol=1e-12, n_nodes=n + 1)[0].value)
    assert all(a > b for a, b in zip(vals, vals[1:])), vals
    assert vals[-1] == pytest.approx(1.0, abs=2e-3)


def test_eigenvector_residual_and_normalization():
    form = harmonic_form(0.3, robin=0.0)
    n = 800
    grid = make_grid(-7.7, 8.3, n)
    pencil = assemble(form, grid)
    for pair in smallest_eigs(pencil, k=2, tol=1e-12, n_nodes=n + 1):
        v = pair.vector[pencil.offset : pencil.offset + pencil.size]
        kv = pencil.stiff_diag * v
        kv[:-1] += pencil.stiff_off * v[1:]
        kv[1:] += pencil.stiff_off * v[:-1]
        resid = kv - pair.value * pencil.mass_diag * v
        assert np.linalg.norm(resid) < 1e-8 * np.linalg.norm(kv)
        assert np.sum(pencil.mass_diag * v * v) == pytest.approx(1.0, abs=1e-12)
        assert pair.vector[np.argmax(np.abs(pair.vector))] > 0.0


def test_smallest_eigs_rejects_bad_k():
    grid = make_grid(0.0, 1.0, 16)
    pencil = assemble(harmonic_form(0.5), grid)
    with pytest.raises(ValueError):
        smallest_eigs(pencil, k=0)


# ---------------------------------------------------------------------------
# converge


def test_converge_grows_window_and_hits_exact_energy():
    # Start with a window far too small for the oscillator centered at 0.76;
    # the result must come from an enlarged domain and land on the exact
    # whole-line ground energy 1.
    res = converge(harmonic_form(0.76), make_grid(-1.0, 2.0, 48), 1e-8)
    assert res.grid.t_min < -1.0
    assert res.grid.t_max > 2.0
    assert res.value == pytest.approx(1.0, abs=1e-7)
    assert len(res.history) >= 2
    assert res.history[-1][0] == res.grid.n


def test_converge_rejects_nonpositive_tol():
    with pytest.raises(ValueError):
        converge(harmonic_form(0.0), make_grid(-2.0, 2.0, 16), 0.0)


def test_converge_reports_cell_budget_exhaustion():
    form = harmonic_form(2.5, robin=0.0)
    with pytest.raises(ConvergenceError):
        converge(
            form,
            make_grid(0.2, 5.0, 8),
            1e-13,
            grow_left=False,
            grow_right=False,
            max_cells=64,
        )


# ---------------------------------------------------------------------------
# interface traces


def test_boundary_traces_recover_one_sided_slopes():
    # sin(2t) + |t| has value 0 and one-sided slopes 3 / 1 at the origin;
    # the stencils are second order, so errors drop ~4x per refinement.
    errs = []
    for n in (600, 1200):
        grid = make_grid(-1.0, 2.0, n)
        v = np.sin(2.0 * grid.nodes) + np.abs(grid.nodes)
        f0, fp, fm = boundary_traces(EigenPair(0.0, v, 1), grid)
        assert f0 == 0.0
        errs.append(abs(fp - 3.0) + abs(fm - 1.0))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.4)


def test_boundary_traces_needs_interface_node():
    grid = make_grid(0.5, 3.0, 32)
    with pytest.raises(ValueError, match="no node"):
        boundary_traces(EigenPair(0.0, np.zeros(33), 1), grid)


def test_boundary_traces_needs_room_for_stencils():
    grid = make_grid(-0.5, 2.0, 5)
    assert grid.zero_index == 1
    with pytest.raises(ValueError, match="too coarse"):
        boundary_traces(EigenPair(0.0, np.zeros(grid.nodes.size), 1), grid)
