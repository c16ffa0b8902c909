import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

import game
import qops
import strategy as strategies
from core.config import PPT_TOL
from core.exceptions import DimensionError, InfeasibleConversionError, NotEntangledError, ValidationError
from core.rng import stream
from models import OptimizeOptions, PayoffReport, QuantumOperator, QuantumVector, SLambdaVerdict, Witness, WitnessKind
from witness import QUESTION_LABELS, canonical_witness, decomposable_witness

logger = logging.getLogger(__name__)

ALICE_INNER_ITERS = 10
PSEUDO_INVERSE_CUTOFF = 1e-7
FAITHFUL_DIM_LIMIT = 6
CERTIFY_TOL = 1e-8


class SeesawProblem:
    """Objective Y ordered [A, A0, B0, B] with the partial maps used by the see-saw."""

    def __init__(self, Y: np.ndarray, d_a: int, d_b: int):
        self.d_a = d_a
        self.d_b = d_b
        self.side_a = d_a * d_a
        self.side_b = d_b * d_b
        self.Y = Y
        self.Y4 = Y.reshape(self.side_a, self.side_b, self.side_a, self.side_b)

    def alice_operator(self, Q: np.ndarray) -> np.ndarray:
        # Tr_Btilde[(I (x) Q) Y]
        return qops.hermitian_part(np.einsum("icjb,bc->ij", self.Y4, Q))

    def bob_operator(self, P: np.ndarray) -> np.ndarray:
        # Tr_Atilde[(P (x) I) Y]
        return qops.hermitian_part(np.einsum("jbic,ij->bc", self.Y4, P))

    def value(self, alice: Sequence[np.ndarray], bob: Sequence[np.ndarray]) -> float:
        return float(sum(np.trace(P @ self.alice_operator(Q)).real for P, Q in zip(alice, bob)))


@dataclass
class SeesawRun:
    alice: List[np.ndarray]
    bob: List[np.ndarray]
    value: float
    iterations: int = 0
    converged: bool = False
    trace: List[float] = field(default_factory=list)


def _problem(W: Witness, rho: QuantumOperator) -> SeesawProblem:
    rho = game.as_state(rho)
    return SeesawProblem(game.split_objective(W, rho), rho.dims[0], rho.dims[1])


# Half steps

def bob_step(problem: SeesawProblem, alice: Sequence[np.ndarray]) -> Tuple[List[np.ndarray], float]:
    bob = []
    total = 0.0
    for P in alice:
        Q, weight = qops.positive_projector(problem.bob_operator(P))
        bob.append(Q)
        total += weight
    return bob, total


def _inverse_sqrt(G: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    vals, vecs = np.linalg.eigh(qops.hermitian_part(G))
    keep = vals > PSEUDO_INVERSE_CUTOFF * max(float(vals[-1]), 1e-300)
    kept = vecs[:, keep]
    inv_sqrt = (kept / np.sqrt(vals[keep])) @ kept.conj().T
    kernel = np.eye(G.shape[0]) - kept @ kept.conj().T
    return inv_sqrt, kernel


def _complete(povm: List[np.ndarray]) -> List[np.ndarray]:
    total = qops.hermitian_part(sum(povm))
    if np.max(np.abs(total - np.eye(total.shape[0]))) < 1e-13:
        return povm
    vals, vecs = np.linalg.eigh(total)
    fix = (vecs / np.sqrt(vals)) @ vecs.conj().T
    return [qops.hermitian_part(fix @ P @ fix) for P in povm]


def alice_step(
    problem: SeesawProblem, alice: Sequence[np.ndarray], bob: Sequence[np.ndarray], inner_iters: int = ALICE_INNER_ITERS
) -> Tuple[List[np.ndarray], float]:
    """
    Improve Alice's POVM for fixed conditionals with the discrimination fixed point
    P_u <- L^-1 M_u P_u M_u L^-1, L = (sum_u M_u P_u M_u)^(1/2), on shifted M_u + cI.
    Only improving iterates are accepted.
    """
    branch_ops = [problem.alice_operator(Q) for Q in bob]
    side = problem.side_a
    shift = max(0.0, -min(float(np.linalg.eigvalsh(M)[0]) for M in branch_ops))
    shifted = [M + shift * np.eye(side) for M in branch_ops]

    def objective(povm: Sequence[np.ndarray]) -> float:
        return float(sum(np.trace(P @ M).real for P, M in zip(povm, branch_ops)))

    best = [np.array(P, dtype=complex) for P in alice]
    best_value = objective(best)
    current = best
    for _ in range(inner_iters):
        weighted = [M @ P @ M for M, P in zip(shifted, current)]
        inv_sqrt, kernel = _inverse_sqrt(sum(weighted))
        proposal = [qops.hermitian_part(inv_sqrt @ X @ inv_sqrt) for X in weighted]
        if np.trace(kernel).real > 0.5:
            target = int(np.argmax([np.trace(kernel @ M).real for M in branch_ops]))
            proposal[target] = proposal[target] + kernel
        proposal = _complete(proposal)
        value = objective(proposal)
        current = proposal
        if value > best_value:
            best, best_value = proposal, value
    return best, best_value


# Single runs

def _run_matched(problem: SeesawProblem, alice: List[np.ndarray], bob: List[np.ndarray], opts: OptimizeOptions) -> SeesawRun:
    value = problem.value(alice, bob)
    run = SeesawRun(alice=alice, bob=bob, value=value, trace=[value])
    for iteration in range(1, opts.max_iter + 1):
        bob, _ = bob_step(problem, run.alice)
        alice, value = alice_step(problem, run.alice, bob)
        gain = value - run.value
        run.iterations = iteration
        if gain >= 0:
            run.alice, run.bob, run.value = alice, bob, value
        run.trace.append(run.value)
        if gain < opts.tol:
            run.converged = True
            break
    return run


def _run_product(problem: SeesawProblem, P: np.ndarray, Q: np.ndarray, opts: OptimizeOptions) -> SeesawRun:
    value = float(np.trace(P @ problem.alice_operator(Q)).real)
    run = SeesawRun(alice=[P], bob=[Q], value=value, trace=[value])
    for iteration in range(1, opts.max_iter + 1):
        Q, _ = qops.positive_projector(problem.bob_operator(run.alice[0]))
        P, value = qops.positive_projector(problem.alice_operator(Q))
        gain = value - run.value
        run.iterations = iteration
        if gain >= 0:
            run.alice, run.bob, run.value = [P], [Q], value
        run.trace.append(run.value)
        if gain < opts.tol:
            run.converged = True
            break
    return run


def _best_of(runs: Sequence[SeesawRun]) -> SeesawRun:
    best = runs[0]
    for run in runs[1:]:
        if run.value > best.value:
            best = run
    return best


def _map_restarts(fn: Callable[[int], SeesawRun], count: int, workers: int) -> List[SeesawRun]:
    if workers > 1 and count > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, range(count)))
    return [fn(i) for i in range(count)]


def _branches(problem: SeesawProblem, opts: OptimizeOptions) -> int:
    return max(2, opts.branches or problem.side_a)


def _bell_alice(d_a: int, branches: int) -> List[np.ndarray]:
    side = d_a * d_a
    povm = [np.zeros((side, side), dtype=complex) for _ in range(branches)]
    for k, ket in enumerate(strategies.weyl_bell_basis(d_a)):
        povm[k % branches] += np.outer(ket, ket.conj())
    return povm


def _phi_plus(d: int) -> np.ndarray:
    ket = np.eye(d).ravel() / np.sqrt(d)
    return np.outer(ket, ket.conj())


# Reports

def upper_bound_global(W: Witness, rho: QuantumOperator) -> float:
    """Sum of positive eigenvalues of W^T (x) rho; bounds every strategy's reward."""
    rho = game.as_state(rho)
    products = np.outer(np.linalg.eigvalsh(W.op.data), np.linalg.eigvalsh(qops.hermitian_part(rho.data)))
    return float(np.sum(products[products > 0]))


def _report(W: Witness, rho: QuantumOperator, run_strategy, run: SeesawRun, starts: int, opts: OptimizeOptions,
            note: Optional[str] = None, trace_scale: float = 1.0) -> PayoffReport:
    # value is recomputed from the strategy itself, not taken from the run
    value = game.payoff_via_witness(W, rho, run_strategy)
    bound = upper_bound_global(W, rho)
    certified = strategies.is_valid_effect(strategies.realized_effect(run_strategy)) and value <= bound + CERTIFY_TOL
    if not certified:
        logger.warning("reported strategy failed certification: value %.12f, bound %.12f", value, bound)
    return PayoffReport(
        value=value,
        upper_bound=bound,
        certified_lower_bound=certified,
        converged=run.converged,
        iterations=run.iterations,
        restarts=starts,
        seed=opts.seed,
        strategy=run_strategy,
        witness=W,
        trace=[trace_scale * t for t in run.trace],
        note=note,
    )


def seesaw_product(W: Witness, rho: QuantumOperator, opts: Optional[OptimizeOptions] = None) -> PayoffReport:
    opts = opts or OptimizeOptions.from_settings()
    problem = _problem(W, rho)

    def restart(index: int) -> SeesawRun:
        alice, bob = strategies.random_start(stream(opts.seed, index), (problem.d_a, problem.d_b), 0, 2)
        return _run_product(problem, alice[0], bob[0], opts)

    runs = [_run_product(problem, _phi_plus(problem.d_a), _phi_plus(problem.d_b), opts)]
    runs += _map_restarts(restart, opts.restarts, opts.workers)
    best = _best_of(runs)
    if not best.converged:
        logger.warning("product see-saw stopped at max_iter=%d without converging", opts.max_iter)
    logger.debug("product see-saw best value %.12f over %d starts", best.value, len(runs))
    result = strategies.product(
        strategies.alice_effect(best.alice[0], problem.d_a),
        strategies.bob_effect(best.bob[0], problem.d_b),
    )
    return _report(W, rho, result, best, len(runs), opts)


def _matched_runs(problem: SeesawProblem, opts: OptimizeOptions) -> SeesawRun:
    branches = _branches(problem, opts)
    dims = (problem.d_a, problem.d_b)

    def restart(index: int) -> SeesawRun:
        alice, bob = strategies.random_start(stream(opts.seed, index), dims, index, branches)
        return _run_matched(problem, alice, bob, opts)

    structured_alice = _bell_alice(problem.d_a, branches)
    structured_bob, _ = bob_step(problem, structured_alice)
    runs = [_run_matched(problem, structured_alice, structured_bob, opts)]
    runs += _map_restarts(restart, opts.restarts, opts.workers)
    best = _best_of(runs)
    if not best.converged:
        logger.warning("matched see-saw stopped at max_iter=%d without converging", opts.max_iter)
    logger.debug("matched see-saw best value %.12f over %d starts", best.value, len(runs))
    return best


def seesaw_matched(W: Witness, rho: QuantumOperator, opts: Optional[OptimizeOptions] = None) -> PayoffReport:
    opts = opts or OptimizeOptions.from_settings()
    problem = _problem(W, rho)
    best = _matched_runs(problem, opts)
    result = strategies.matched_from_arrays(best.alice, best.bob, problem.d_a, problem.d_b)
    return _report(W, rho, result, best, opts.restarts + 1, opts)


# NPT measure

def _ppt_report(W: Witness, rho: QuantumOperator, opts: OptimizeOptions, note: str = "PPT input") -> PayoffReport:
    rho = game.as_state(rho)
    run = SeesawRun(alice=[], bob=[], value=0.0, converged=True, trace=[0.0])
    return _report(W, rho, strategies.trivial(rho.dims[0], rho.dims[1]), run, 0, opts, note=note)


def negative_directions(rho: QuantumOperator) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of rho^{T_B} with eigenvalue below -PPT_TOL, most negative first."""
    vals, vecs = qops.eig_hermitian(qops.partial_transpose(rho, ["B"]))
    order = np.argsort(vals)
    mask = vals[order] < -PPT_TOL
    return vals[order][mask], vecs[:, order][:, mask]


def _detecting_witness(rho: QuantumOperator, vec: np.ndarray) -> Witness:
    return decomposable_witness(QuantumVector.build(list(QUESTION_LABELS), list(rho.dims), vec))


def _require_decomposable(W: Witness) -> None:
    if W.kind != WitnessKind.DECOMPOSABLE or W.source_vector is None:
        raise ValidationError("the NPT pay-off needs a decomposable witness with its source vector")
    left, right = W.source_vector.labels
    rank = qops.schmidt_decompose(W.source_vector, ([left], [right])).rank
    if rank != W.D:
        raise ValidationError(f"decomposable witness source has Schmidt rank {rank}, expected D = {W.D}")


def _pull_back(W: Witness, V: Witness, rho: QuantumOperator, inner: PayoffReport, opts: OptimizeOptions) -> PayoffReport:
    result = strategies.slocc_filter(W.source_vector, V.source_vector)
    pulled = strategies.filter_pullback(inner.strategy, strategies.question_filters(result))
    logger.debug("pulled back inner value %.12f with q = %.12f", inner.value, result.q)
    run = SeesawRun(alice=[], bob=[], value=0.0, iterations=inner.iterations, converged=inner.converged, trace=inner.trace)
    return _report(W, rho, pulled, run, inner.restarts, opts, trace_scale=result.q)


def payoff_npt(W: Witness, rho: QuantumOperator, opts: Optional[OptimizeOptions] = None) -> PayoffReport:
    """
    NPT pay-off of a decomposable game: optimize the game of the most negative
    partial-transpose direction, carry the strategy back through the SLOCC filter,
    and keep whichever beats a direct see-saw on W.
    """
    opts = opts or OptimizeOptions.from_settings()
    _require_decomposable(W)
    rho = game.as_state(rho)
    if W.op.dims != rho.dims:
        raise DimensionError(f"witness dims {list(W.op.dims)} do not match state dims {list(rho.dims)}")
    vals, vecs = negative_directions(rho)
    if not len(vals):
        return _ppt_report(W, rho, opts)
    V = _detecting_witness(rho, vecs[:, 0])
    inner = seesaw_matched(V, rho, opts)
    pulled = _pull_back(W, V, rho, inner, opts)
    direct = seesaw_matched(W, rho, opts)
    if direct.value > pulled.value:
        logger.debug("direct see-saw on W beats the filtered strategy: %.12f > %.12f", direct.value, pulled.value)
        return direct
    return pulled


# Restricted measure over extremal decomposable games

def _witness_step(alice: Sequence[np.ndarray], bob: Sequence[np.ndarray], rho: QuantumOperator) -> Tuple[np.ndarray, float]:
    """Best source vector for fixed effects: minimum eigenvector of R^{T_A0}, R = Tr_AB[Z (I (x) rho)]."""
    d_a, d_b = rho.dims
    Z = sum(np.kron(P, Q) for P, Q in zip(alice, bob))
    z = Z.reshape(d_a, d_a, d_b, d_b, d_a, d_a, d_b, d_b)
    r = rho.data.reshape(d_a, d_b, d_a, d_b)
    R = np.einsum("xijyXIJY,XYxy->ijIJ", z, r).reshape(d_a * d_b, d_a * d_b)
    R_pt = qops.ptranspose_array(qops.hermitian_part(R), (d_a, d_b), [0])
    vals, vecs = np.linalg.eigh(qops.hermitian_part(R_pt))
    return vecs[:, 0], float(-min(d_a, d_b) * vals[0])


def _refine(rho: QuantumOperator, phi: np.ndarray, run: SeesawRun, opts: OptimizeOptions) -> Tuple[np.ndarray, SeesawRun]:
    best_phi = phi
    best = run
    for _ in range(opts.max_iter):
        phi_new, _ = _witness_step(best.alice, best.bob, rho)
        try:
            V = _detecting_witness(rho, phi_new)
        except NotEntangledError:
            logger.debug("witness step reached a product vector; refinement stops")
            break
        problem = SeesawProblem(game.split_objective(V, rho), *rho.dims)
        bob, _ = bob_step(problem, best.alice)
        alice, value = alice_step(problem, best.alice, bob)
        gain = value - best.value
        if gain > 0:
            best_phi = phi_new
            best = SeesawRun(alice=alice, bob=bob, value=value, iterations=best.iterations + 1,
                             converged=False, trace=best.trace + [value])
        if gain < opts.tol:
            best.converged = True
            break
    return best_phi, best


def payoff_bullet(rho: QuantumOperator, opts: Optional[OptimizeOptions] = None) -> PayoffReport:
    """
    Restricted measure: best NPT pay-off over decomposable games from the top-k negative
    partial-transpose directions and the canonical witness, followed by joint
    refinement of the witness vector and the strategy.
    """
    opts = opts or OptimizeOptions.from_settings()
    rho = game.as_state(rho)
    d_a, d_b = rho.dims
    blind = d_a * d_b > FAITHFUL_DIM_LIMIT
    note = "lower bound only; PPT-entanglement blind" if blind else None

    vals, vecs = negative_directions(rho)
    if not len(vals):
        return _ppt_report(canonical_witness(d_a, d_b), rho, opts, note=note or "PPT input")

    V = _detecting_witness(rho, vecs[:, 0])
    problem = _problem(V, rho)
    inner_run = _matched_runs(problem, opts)
    inner = _report(V, rho, strategies.matched_from_arrays(inner_run.alice, inner_run.bob, d_a, d_b),
                    inner_run, opts.restarts + 1, opts)

    family = [_detecting_witness(rho, vecs[:, k]) for k in range(min(opts.top_k, vecs.shape[1]))]
    family.append(canonical_witness(d_a, d_b))
    best_report = None
    for W in family:
        try:
            report = _pull_back(W, V, rho, inner, opts)
        except InfeasibleConversionError as exc:
            logger.debug("skipping family witness: %s", exc)
            continue
        if best_report is None or report.value > best_report.value:
            best_report = report

    phi, refined = _refine(rho, vecs[:, 0], inner_run, opts)
    if refined.value > best_report.value + opts.tol:
        V_star = _detecting_witness(rho, phi)
        result = strategies.matched_from_arrays(refined.alice, refined.bob, d_a, d_b)
        best_report = _report(V_star, rho, result, refined, opts.restarts + 1, opts)
    return best_report.model_copy(update={"note": note})


def s_lambda_member(rho: QuantumOperator, lam: float, opts: Optional[OptimizeOptions] = None) -> SLambdaVerdict:
    if lam < 0:
        raise ValidationError("lambda must be non-negative")
    report = payoff_bullet(rho, opts)
    return SLambdaVerdict(lam=lam, member=report.value <= lam + 1e-9, certificate=report)
