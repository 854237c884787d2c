"""Finite-N Metropolis sampling for Dirac ensembles.

Bosonic ensembles are sampled directly in matrix space with single-entry
Hermitian-preserving proposals.  The multitrace action only depends on the
trace powers t_k = Tr H^k, and a single-entry update changes H by a rank-two
perturbation, so every t_k (k <= 4) can be updated exactly in O(N) work per
proposal; the running values are refreshed from scratch at every measurement
to keep float drift bounded.

Fermionic ensembles carry a log-determinant weight that depends on the
eigenvalues only, so they are sampled in eigenvalue coordinates where the
Hermitian matrix measure contributes the usual Vandermonde repulsion
-sum_{i<j} 2 log|l_i - l_j|.

Moment estimates are normalized as (1/N) Tr of the word and carry batch-means
standard errors.  A scalar quadrature oracle provides exact N=1 moments for
cross-checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy import integrate

from .dirac import EnsembleSpec
from .words import CyclicWord, Word, moment_key


class MCError(ValueError):
    """Invalid chain configuration or an estimator without enough data."""


@dataclass(frozen=True)
class ChainConfig:
    """Monte Carlo chain parameters.

    ``steps`` counts sweeps in total, burn-in included; one sweep makes one
    proposal per independent matrix entry (per eigenvalue in eigenvalue
    coordinates).  The proposal scale adapts toward ``target_acceptance``
    during burn-in only and is frozen afterwards.
    """

    n: int
    steps: int = 4000
    burn_in: int = 500
    step_size: float = 0.5
    seed: int = 0
    thinning: int = 1
    target_acceptance: float = 0.5
    max_power: int = 8

    def __post_init__(self):
        if self.n < 1:
            raise MCError("matrix size must be at least 1")
        if self.burn_in < 0:
            raise MCError("burn_in must be non-negative")
        if self.steps <= self.burn_in:
            raise MCError(
                "steps must exceed burn_in; the measurement set would be empty"
            )
        if self.thinning < 1:
            raise MCError("thinning must be at least 1")
        if not (self.step_size > 0 and math.isfinite(self.step_size)):
            raise MCError("step_size must be positive and finite")
        if self.max_power < 2:
            raise MCError("max_power must be at least 2")


@dataclass(frozen=True)
class MomentEstimate:
    word: CyclicWord
    mean: float
    stderr: float
    n_batches: int

    def __post_init__(self):
        if self.stderr < 0:
            raise MCError("stderr must be non-negative")


@dataclass
class Chain:
    """Measurement record of one Metropolis run.

    ``power_sums[s, k-1]`` holds Tr H^k at measurement s for single-matrix
    ensembles; multi-matrix runs store matrix snapshots instead and compute
    word traces on demand.
    """

    spec: EnsembleSpec
    config: ChainConfig
    chain_index: int
    power_sums: np.ndarray | None
    snapshots: list[tuple[np.ndarray, ...]] | None
    acceptance: float
    final_step: float

    @property
    def n_samples(self) -> int:
        if self.power_sums is not None:
            return self.power_sums.shape[0]
        return len(self.snapshots)

    def trace_series(self, word: Word | CyclicWord | str) -> np.ndarray:
        """Per-sample values of (1/N) Re Tr of the word."""
        word = _as_word(word, self.spec)
        n = self.config.n
        if len(word) == 0:
            return np.ones(self.n_samples)
        if self.power_sums is not None:
            if any(l != 0 for l in word.letters):
                raise MCError("single-matrix chain only carries powers of H")
            k = len(word)
            if k > self.config.max_power:
                raise MCError(
                    f"word degree {k} exceeds max_power={self.config.max_power}"
                )
            return self.power_sums[:, k - 1] / n
        out = np.empty(len(self.snapshots))
        for s, mats in enumerate(self.snapshots):
            prod = mats[word.letters[0]]
            for l in word.letters[1:]:
                prod = prod @ mats[l]
            out[s] = np.trace(prod).real / n
        return out


def _as_word(word: Word | CyclicWord | str, spec: EnsembleSpec) -> Word:
    if isinstance(word, str):
        return Word.from_str(word, spec.letter_names)
    if isinstance(word, CyclicWord):
        return word.rep
    return word


def _rng(seed: int, chain_index: int) -> np.random.Generator:
    # Counter-based generator; the chain index lands in the upper key word so
    # parallel chains draw from provably disjoint streams.
    key = (int(chain_index) << 64) | (int(seed) & (2**64 - 1))
    return np.random.Generator(np.random.Philox(key=key))


def _scalar_terms(spec: EnsembleSpec, n: int) -> list[tuple[float, tuple[int, ...]]]:
    """Action as a polynomial in the trace powers, N substituted in."""
    terms = []
    for mono, lin in spec.numeric_action().items():
        coeff = float(lin.constant_part()) * float(n) ** mono.n_power
        lens = tuple(len(f) for f in mono.factors)
        if any(l != 0 for f in mono.factors for l in f.rep.letters):
            raise MCError("trace-power form needs a single-letter alphabet")
        terms.append((coeff, lens))
    return terms


def _poly_action(terms, t) -> float:
    total = 0.0
    for coeff, lens in terms:
        v = coeff
        for l in lens:
            v *= t[l - 1]
        total += v
    return total


def _power_sums(eigs: np.ndarray, max_power: int) -> np.ndarray:
    out = np.empty(max_power)
    p = np.ones_like(eigs)
    for k in range(max_power):
        p = p * eigs
        out[k] = p.sum()
    return out


def _deltas_off(h, p2, diag, p2diag, i, j, z, need_p2, need_p3):
    """Exact changes of (Tr H^2, Tr H^3, Tr H^4) under H += z E_ij + z* E_ji.

    Rank-two perturbations leave every trace power a short polynomial in a
    handful of entries of H, P2 = H^2 and one row-by-column product of the
    missing H^3 entry, so no power matrices beyond P2 are kept.
    """
    a = h[i, j].item()
    zz = z.real * z.real + z.imag * z.imag
    raz = (a.conjugate() * z).real
    d2 = 4.0 * raz + 2.0 * zz
    d3 = d4 = 0.0
    hii, hjj = diag[i], diag[j]
    if need_p2:
        b = p2[i, j].item()
        d3 = 6.0 * (b.conjugate() * z).real + 3.0 * zz * (hii + hjj)
    if need_p3:
        c = np.dot(h[i], p2[:, j]).item()
        d4 = (
            8.0 * (c.conjugate() * z).real
            + 4.0 * zz * (p2diag[i] + p2diag[j])
            + 4.0 * (z * z * a.conjugate() * a.conjugate()).real
            + 4.0 * zz * hii * hjj
            + 8.0 * zz * raz
            + 2.0 * zz * zz
        )
    return d2, d3, d4


def _deltas_diag(h, p2, diag, p2diag, i, x, need_p2, need_p3):
    """Exact changes of (Tr H, .., Tr H^4) under H += x E_ii with x real."""
    hii = diag[i]
    d2 = 2.0 * x * hii + x * x
    d3 = d4 = 0.0
    if need_p2:
        p2ii = p2diag[i]
        d3 = 3.0 * x * p2ii + 3.0 * x * x * hii + x**3
    if need_p3:
        p3ii = np.dot(h[i], p2[:, i]).real
        d4 = (
            4.0 * x * p3ii
            + 4.0 * x * x * p2ii
            + 2.0 * x * x * hii * hii
            + 4.0 * x**3 * hii
            + x**4
        )
    return x, d2, d3, d4


def _apply_off(h, p2, diag, p2diag, i, j, z, need_p2):
    """Commit H += z E_ij + z* E_ji, updating the P2 mirror in O(N)."""
    if need_p2:
        a = h[i, j].item()
        zz = z.real * z.real + z.imag * z.imag
        zc = z.conjugate()
        p2[:, i] += zc * h[:, j]
        p2[:, j] += z * h[:, i]
        p2[i, :] += z * h[j, :]
        p2[j, :] += zc * h[i, :]
        p2[i, i] += zz
        p2[j, j] += zz
        inc = 2.0 * (zc * a).real + zz
        p2diag[i] += inc
        p2diag[j] += inc
    h[i, j] += z
    h[j, i] += z.conjugate()


def _apply_diag(h, p2, diag, p2diag, i, x, need_p2):
    if need_p2:
        p2[:, i] += x * h[:, i]
        p2[i, :] += x * h[i, :]
        p2[i, i] += x * x
        p2diag[i] += 2.0 * x * diag[i] + x * x
    h[i, i] += x
    diag[i] += x


def metropolis_sample(
    spec: EnsembleSpec, cfg: ChainConfig, chain_index: int = 0
) -> Chain:
    """Run a single Metropolis chain for the ensemble.

    Dispatch: fermionic specs sample in eigenvalue coordinates, bosonic
    single-matrix specs use the delta-tracked matrix sampler, multi-matrix
    specs fall back to full action recomputation per proposal.
    """
    if spec.fermionic is not None:
        return eigenvalue_sample(spec, cfg, chain_index)
    if spec.alphabet == 1:
        return _sample_single_matrix(spec, cfg, chain_index)
    return _sample_generic(spec, cfg, chain_index)


def _sample_single_matrix(spec, cfg: ChainConfig, chain_index: int) -> Chain:
    n = cfg.n
    terms = _scalar_terms(spec, n)
    degree = max((sum(lens) for _, lens in terms), default=0)
    if degree > 4:
        return _sample_generic(spec, cfg, chain_index)
    need_p2 = any(any(l >= 3 for l in lens) for _, lens in terms)
    need_p3 = any(any(l >= 4 for l in lens) for _, lens in terms)

    rg = _rng(cfg.seed, chain_index)
    h = np.zeros((n, n), dtype=complex)
    p2 = np.zeros((n, n), dtype=complex)
    iu, ju = np.triu_indices(n)
    si, sj = iu.tolist(), ju.tolist()
    npairs = len(si)

    t = [0.0, 0.0, 0.0, 0.0]
    diag = [0.0] * n
    p2diag = [0.0] * n

    def refresh():
        nonlocal p2
        np.conjugate(h.T, out=p2)
        h[:] = 0.5 * (h + p2)
        p2 = h @ h
        eigs = np.linalg.eigvalsh(h)
        ps = _power_sums(eigs, 4)
        t[0], t[1], t[2], t[3] = ps.tolist()
        for i in range(n):
            diag[i] = h[i, i].real
            p2diag[i] = p2[i, i].real
        return eigs

    step = cfg.step_size
    target = cfg.target_acceptance
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    s_cur = _poly_action(terms, t)
    rows: list[np.ndarray] = []
    accepted = total = 0

    for sweep in range(cfg.steps):
        sites = rg.integers(0, npairs, size=npairs).tolist()
        zr = rg.standard_normal(npairs).tolist()
        zi = rg.standard_normal(npairs).tolist()
        ua = rg.random(npairs).tolist()
        acc_sweep = 0
        for k in range(npairs):
            s = sites[k]
            i, j = si[s], sj[s]
            if i == j:
                x = step * zr[k]
                d1, d2, d3, d4 = _deltas_diag(h, p2, diag, p2diag, i, x, need_p2, need_p3)
                tn = (t[0] + d1, t[1] + d2, t[2] + d3, t[3] + d4)
                ds = _poly_action(terms, tn) - s_cur
                if ds <= 0.0 or ua[k] < math.exp(-min(ds, 700.0)):
                    _apply_diag(h, p2, diag, p2diag, i, x, need_p2)
                    t[0], t[1], t[2], t[3] = tn
                    s_cur += ds
                    acc_sweep += 1
            else:
                z = complex(step * zr[k] * inv_sqrt2, step * zi[k] * inv_sqrt2)
                d2, d3, d4 = _deltas_off(h, p2, diag, p2diag, i, j, z, need_p2, need_p3)
                tn = (t[0], t[1] + d2, t[2] + d3, t[3] + d4)
                ds = _poly_action(terms, tn) - s_cur
                if ds <= 0.0 or ua[k] < math.exp(-min(ds, 700.0)):
                    _apply_off(h, p2, diag, p2diag, i, j, z, need_p2)
                    t[0], t[1], t[2], t[3] = tn
                    s_cur += ds
                    acc_sweep += 1
        accepted += acc_sweep
        total += npairs
        in_burn = sweep < cfg.burn_in
        if in_burn:
            step *= math.exp(0.4 * (acc_sweep / npairs - target))
            step = min(max(step, 1e-4), 50.0)
            if (sweep + 1) % 50 == 0:
                refresh()
                s_cur = _poly_action(terms, t)
        elif (sweep - cfg.burn_in + 1) % cfg.thinning == 0:
            eigs = refresh()
            s_cur = _poly_action(terms, t)
            rows.append(_power_sums(eigs, cfg.max_power))

    return Chain(
        spec=spec,
        config=cfg,
        chain_index=chain_index,
        power_sums=np.array(rows),
        snapshots=None,
        acceptance=accepted / total,
        final_step=step,
    )


def _multitrace_value(action, mats, n: int) -> float:
    total = 0.0
    for mono, lin in action.items():
        v = float(lin.constant_part()) * float(n) ** mono.n_power
        for f in mono.factors:
            prod = mats[f.rep.letters[0]]
            for l in f.rep.letters[1:]:
                prod = prod @ mats[l]
            v *= np.trace(prod).real
        total += v
    return total


def action_value(spec: EnsembleSpec, matrices) -> float:
    """Exact action of a Hermitian configuration.

    Returns +inf for configurations rejected by a massless fermionic weight
    (coincident eigenvalues make its log argument vanish).
    """
    if isinstance(matrices, np.ndarray):
        matrices = (matrices,)
    mats = tuple(np.asarray(m, dtype=complex) for m in matrices)
    if len(mats) != spec.alphabet:
        raise ValueError(f"expected {spec.alphabet} matrices, got {len(mats)}")
    n = mats[0].shape[0]
    for m in mats:
        if m.shape != (n, n):
            raise ValueError("matrices must share a common square shape")
        if not np.allclose(m, m.conj().T, atol=1e-10 * max(1.0, abs(m).max())):
            raise ValueError("matrices must be Hermitian")
    total = _multitrace_value(spec.numeric_action(), mats, n)
    ferm = spec.fermionic
    if ferm is not None:
        eigs = np.linalg.eigvalsh(mats[0])
        diffs = eigs[:, None] - eigs[None, :]
        args = ferm.mass**2 + diffs**2
        if ferm.mass == 0.0:
            off = args[~np.eye(n, dtype=bool)]
            if off.size and off.min() <= 0.0:
                return math.inf
            total -= 0.25 * ferm.beta2 * np.log(off).sum() if off.size else 0.0
        else:
            total -= 0.25 * ferm.beta2 * np.log(args).sum()
        total += ferm.a * eigs.sum() ** 2
    return float(total)


def _sample_generic(spec, cfg: ChainConfig, chain_index: int) -> Chain:
    """Reference sampler: full action recomputation per proposal.

    Used for multi-matrix alphabets and for single-matrix actions above
    degree 4; meant for moderate N.
    """
    n = cfg.n
    rg = _rng(cfg.seed, chain_index)
    mats = [np.zeros((n, n), dtype=complex) for _ in range(spec.alphabet)]
    action = spec.numeric_action()
    s_cur = _multitrace_value(action, mats, n)
    iu, ju = np.triu_indices(n)
    si, sj = iu.tolist(), ju.tolist()
    npairs = len(si)
    per_sweep = npairs * spec.alphabet
    step = cfg.step_size
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    snapshots = []
    accepted = total = 0

    for sweep in range(cfg.steps):
        which = rg.integers(0, spec.alphabet, size=per_sweep).tolist()
        sites = rg.integers(0, npairs, size=per_sweep).tolist()
        zr = rg.standard_normal(per_sweep).tolist()
        zi = rg.standard_normal(per_sweep).tolist()
        ua = rg.random(per_sweep).tolist()
        acc_sweep = 0
        for k in range(per_sweep):
            m = mats[which[k]]
            i, j = si[sites[k]], sj[sites[k]]
            if i == j:
                old = m[i, i].item()
                m[i, i] = old + step * zr[k]
            else:
                old = m[i, j].item()
                z = complex(step * zr[k] * inv_sqrt2, step * zi[k] * inv_sqrt2)
                m[i, j] = old + z
                m[j, i] = (old + z).conjugate()
            s_new = _multitrace_value(action, mats, n)
            ds = s_new - s_cur
            if ds <= 0.0 or ua[k] < math.exp(-min(ds, 700.0)):
                s_cur = s_new
                acc_sweep += 1
            else:
                m[i, j] = old
                if i != j:
                    m[j, i] = old.conjugate()
        accepted += acc_sweep
        total += per_sweep
        if sweep < cfg.burn_in:
            step *= math.exp(0.4 * (acc_sweep / per_sweep - cfg.target_acceptance))
            step = min(max(step, 1e-4), 50.0)
        elif (sweep - cfg.burn_in + 1) % cfg.thinning == 0:
            snapshots.append(tuple(m.copy() for m in mats))

    return Chain(
        spec=spec,
        config=cfg,
        chain_index=chain_index,
        power_sums=None,
        snapshots=snapshots,
        acceptance=accepted / total,
        final_step=step,
    )


def eigenvalue_sample(
    spec: EnsembleSpec, cfg: ChainConfig, chain_index: int = 0
) -> Chain:
    """Sample the joint eigenvalue density of a single-matrix ensemble.

    The Hermitian matrix measure contributes -2 sum_{i<j} log|l_i - l_j|; a
    fermionic block adds -(beta2/4) sum over distinct pairs of
    log(m^2 + (l_i - l_j)^2) and the trace regulator a (sum l)^2.  Proposals
    move one eigenvalue at a time.
    """
    if spec.alphabet != 1:
        raise MCError("eigenvalue sampling needs a single-matrix ensemble")
    n = cfg.n
    terms = _scalar_terms(spec, n)
    deg = max(4, max((max(lens) for _, lens in terms if lens), default=2))
    ferm = spec.fermionic
    mass2 = ferm.mass**2 if ferm is not None else 0.0
    beta_half = 0.5 * ferm.beta2 if ferm is not None else 0.0
    a_reg = ferm.a if ferm is not None else 0.0

    rg = _rng(cfg.seed, chain_index)
    # Spread the start so the massless log terms are finite from step one.
    lam = (np.arange(n) - 0.5 * (n - 1)).astype(float) * (1.0 / max(n, 2))
    lam = lam.tolist()
    t = [0.0] * deg

    def refresh_t():
        ps = _power_sums(np.array(lam), deg)
        t[:] = ps.tolist()

    refresh_t()
    step = cfg.step_size
    rows = []
    accepted = total = 0

    for sweep in range(cfg.steps):
        sites = rg.integers(0, n, size=n).tolist()
        dxs = rg.standard_normal(n).tolist()
        ua = rg.random(n).tolist()
        acc_sweep = 0
        for k in range(n):
            i = sites[k]
            x = lam[i]
            xn = x + step * dxs[k]
            tn = list(t)
            xp_old, xp_new = 1.0, 1.0
            for p in range(deg):
                xp_old *= x
                xp_new *= xn
                tn[p] += xp_new - xp_old
            dpoly = _poly_action(terms, tn) - _poly_action(terms, t)
            dlog = 0.0
            ok = True
            for j in range(n):
                if j == i:
                    continue
                dn = xn - lam[j]
                do = x - lam[j]
                if dn == 0.0:
                    ok = False
                    break
                dlog -= 2.0 * (math.log(abs(dn)) - math.log(abs(do)))
                if ferm is not None:
                    an, ao = mass2 + dn * dn, mass2 + do * do
                    if an <= 0.0:
                        ok = False
                        break
                    dlog -= beta_half * (math.log(an) - math.log(ao))
            if not ok:
                continue
            ds = dpoly + dlog
            if a_reg:
                ds += a_reg * (tn[0] ** 2 - t[0] ** 2)
            if ds <= 0.0 or ua[k] < math.exp(-min(ds, 700.0)):
                lam[i] = xn
                t[:] = tn
                acc_sweep += 1
        accepted += acc_sweep
        total += n
        if sweep < cfg.burn_in:
            step *= math.exp(0.4 * (acc_sweep / n - cfg.target_acceptance))
            step = min(max(step, 1e-5), 50.0)
            if (sweep + 1) % 100 == 0:
                refresh_t()
        elif (sweep - cfg.burn_in + 1) % cfg.thinning == 0:
            refresh_t()
            rows.append(_power_sums(np.array(lam), cfg.max_power))

    return Chain(
        spec=spec,
        config=cfg,
        chain_index=chain_index,
        power_sums=np.array(rows),
        snapshots=None,
        acceptance=accepted / total,
        final_step=step,
    )


def estimate_moments(chain: Chain, words) -> list[MomentEstimate]:
    """Batch-means moment estimates, normalized by 1/N.

    Twenty batches are used when the chain affords them; the empty word is
    exactly 1 with zero error.
    """
    n = chain.n_samples
    if n == 0:
        raise MCError("chain carries no measurements")
    nb = min(20, n // 2)
    if nb < 2:
        raise MCError(f"only {n} samples: fewer than 2 batches")
    out = []
    for word in words:
        w = _as_word(word, chain.spec)
        key = moment_key(w)
        if len(w) == 0:
            out.append(MomentEstimate(key, 1.0, 0.0, nb))
            continue
        series = chain.trace_series(w)
        used = n - n % nb
        batches = series[:used].reshape(nb, -1).mean(axis=1)
        mean = float(series[:used].mean())
        stderr = float(batches.std(ddof=1) / math.sqrt(nb))
        out.append(MomentEstimate(key, mean, stderr, nb))
    return out


def combine_estimates(estimates) -> MomentEstimate:
    """Merge estimates of the same word from independent chains."""
    estimates = list(estimates)
    if not estimates:
        raise MCError("nothing to combine")
    key = estimates[0].word
    if any(e.word != key for e in estimates):
        raise MCError("estimates refer to different words")
    k = len(estimates)
    mean = sum(e.mean for e in estimates) / k
    stderr = math.sqrt(sum(e.stderr**2 for e in estimates)) / k
    return MomentEstimate(key, mean, stderr, sum(e.n_batches for e in estimates))


def sample_chains(
    spec: EnsembleSpec, cfg: ChainConfig, n_chains: int, threads: int = 1
) -> list[Chain]:
    """Run independent chains (disjoint Philox streams), merged by index."""
    if n_chains < 1:
        raise MCError("need at least one chain")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(metropolis_sample, spec, cfg, c) for c in range(n_chains)
            ]
            return [f.result() for f in futures]
    return [metropolis_sample(spec, cfg, c) for c in range(n_chains)]


def _scalar_action_poly(spec: EnsembleSpec) -> list[float]:
    """Coefficients of the N=1 action S(h), index = power of h."""
    coeffs: dict[int, float] = {}
    for mono, lin in spec.numeric_action().items():
        d = mono.degree()
        coeffs[d] = coeffs.get(d, 0.0) + float(lin.constant_part())
    ferm = spec.fermionic
    if ferm is not None:
        # At N=1 the pair sums are empty; only the trace regulator survives.
        coeffs[2] = coeffs.get(2, 0.0) + ferm.a
    top = max((d for d, c in coeffs.items() if c != 0.0), default=0)
    if top == 0 or top % 2 or coeffs[top] <= 0.0:
        raise MCError("N=1 action is not convergent; the integral diverges")
    out = [0.0] * (top + 1)
    for d, c in coeffs.items():
        out[d] = c
    return out


def scalar_oracle(spec: EnsembleSpec, k: int) -> float:
    """Exact N=1 moment m_k by adaptive quadrature.

    Odd moments of an even action are returned as exactly zero.
    """
    if k < 0:
        raise ValueError("moment order must be non-negative")
    coeffs = _scalar_action_poly(spec)
    even = all(c == 0.0 for d, c in enumerate(coeffs) if d % 2)
    if even and k % 2:
        return 0.0

    def weight(h):
        s = 0.0
        hp = 1.0
        for c in coeffs:
            s += c * hp
            hp *= h
        return math.exp(-s)

    kwargs = dict(epsabs=1e-10, epsrel=1e-12, limit=400)
    z, z_err = integrate.quad(weight, -np.inf, np.inf, **kwargs)
    if not math.isfinite(z) or z <= 0 or z_err > 1e-6 * z:
        raise MCError("normalization integral did not converge")
    if k == 0:
        return 1.0
    num, num_err = integrate.quad(lambda h: h**k * weight(h), -np.inf, np.inf, **kwargs)
    if not math.isfinite(num) or num_err > 1e-8 * max(1.0, abs(num)):
        raise MCError(f"moment integral of order {k} did not converge")
    return num / z
