"""
Filename: experiment_service.py
Project: TD Clock Stability (TDCS)
Description: Service Layer behind the command line: resolves instances, runs the numerical
             services and writes result files
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import logging
import math
from pathlib import Path
from typing import List
from typing import NamedTuple
from typing import Optional
from typing import Tuple

import numpy as np

from td_clock_stability._exceptions import DomainError
from td_clock_stability._exceptions import NumericalInconsistencyError
from td_clock_stability.core.config import StabilitySettings
from td_clock_stability.dao.instance_dao import InstanceDAO
from td_clock_stability.dao.results_dao import ResultsDAO
from td_clock_stability.models.counterexample_models import CounterexampleFamily
from td_clock_stability.models.instance_models import StabilityInstance
from td_clock_stability.models.mdp_models import PolicyPair
from td_clock_stability.models.mdp_models import TabularMDP
from td_clock_stability.schemas.run_schemas import CommandName
from td_clock_stability.schemas.run_schemas import CommandResult
from td_clock_stability.schemas.run_schemas import FamilyDescriptor
from td_clock_stability.schemas.run_schemas import Figure
from td_clock_stability.schemas.run_schemas import RunConfig
from td_clock_stability.schemas.td_schemas import DifferentialTD
from td_clock_stability.schemas.td_schemas import DiscountedTD
from td_clock_stability.schemas.td_schemas import TDTrajectory
from td_clock_stability.services import counterexample
from td_clock_stability.services import mdp as mdp_service
from td_clock_stability.services import stability
from td_clock_stability.services import td
from td_clock_stability.services.polyalg import matrix_eigenvalues
from td_clock_stability.services.polyalg import stationary_distribution
from td_clock_stability.utils.method_logger import method_logger
from td_clock_stability.utils.run_context import get_run_id
from td_clock_stability.utils.serialization import format_float

logger = logging.getLogger(__name__)

TRAJECTORY_COLUMNS = ["t", "norm_v", "dist_e", "J_hat", "diverged_flag"]
FIG1_POINTS = 400
FIG1_T_MAX = 4.0
APPENDIX_SEEDS = list(range(1, 10))
# sampled etas closer than this (relative) to a boundary root are not compared against the oracle
VERIFY_MARGIN = 1e-6


class ResolvedSource(NamedTuple):
    instance: StabilityInstance
    label: str
    eta_unit: float
    family: Optional[CounterexampleFamily] = None
    mdp: Optional[TabularMDP] = None
    policies: Optional[PolicyPair] = None


class ExperimentService:
    def __init__(self, instance_dao: InstanceDAO, results_dao: ResultsDAO, settings: StabilitySettings):
        """
        Initializes the experiment service. Instance files named on the command line are read
        relative to the working directory; every output goes below the results directory.
        """
        self.instance_dao = instance_dao
        self.results_dao = results_dao
        self.settings = settings

    # instance resolution

    def _from_family(self, descriptor: FamilyDescriptor) -> ResolvedSource:
        fam = counterexample.build_family(descriptor.m)
        return ResolvedSource(counterexample.family_instance(fam), f"example1-m{fam.m}", fam.alpha, family=fam)

    def resolve_source(self, config: RunConfig) -> ResolvedSource:
        source = config.source
        if source.family is not None:
            return self._from_family(source.family)

        path = Path(source.instance).expanduser().resolve()
        record = self.instance_dao.load(path)
        if record.kind == "family":
            return self._from_family(record.family)
        if record.kind == "matrices":
            return ResolvedSource(record.instance, record.instance.name or path.stem, 1.0)
        P_mu = mdp_service.behavior_transition_matrix(record.mdp, record.policies)
        d_mu = stationary_distribution(P_mu, config.tolerances)
        inst = StabilityInstance(d_mu=d_mu, P_pi=mdp_service.target_transition_matrix(record.mdp, record.policies), name=path.stem)
        return ResolvedSource(inst, path.stem, 1.0, mdp=record.mdp, policies=record.policies)

    def _eta(self, config: RunConfig, source: ResolvedSource, default_ratio: Optional[float] = None) -> float:
        if config.eta is not None:
            return config.eta
        if config.eta_ratio is not None:
            return config.eta_ratio * source.eta_unit
        if default_ratio is None:
            exception = DomainError("eta", None, "give --eta or --eta-ratio")
            logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
            raise exception
        return default_ratio * source.eta_unit

    def _experiment_mdp(self, config: RunConfig, source: ResolvedSource) -> Tuple[TabularMDP, PolicyPair]:
        if source.mdp is not None:
            return source.mdp, source.policies
        return mdp_service.build_experiment_mdp(source.family or source.instance, config.kappa, config.tolerances)

    def _output(self, config: RunConfig, default: str) -> str:
        return config.output or default

    # commands

    def _verify_region(self, config: RunConfig, inst: StabilityInstance, region, eta_cap: float, scale: float) -> Tuple[int, int]:
        """compares the region against the eigenvalue oracle at log-uniform samples; returns (checked, skipped)"""
        rng = np.random.default_rng(config.seeds[0])
        lower = 1e-3 * min([scale, *(root for root in region.critical_roots if root > 0)])
        etas = np.exp(rng.uniform(math.log(lower), math.log(eta_cap), config.verify_samples))
        checked = skipped = 0
        for eta in etas:
            if any(abs(eta - root) <= VERIFY_MARGIN * root for root in region.boundary_roots):
                skipped += 1
                continue
            oracle = bool(np.all(matrix_eigenvalues(stability.build_A(inst, float(eta))).real > 0))
            if oracle != region.contains(float(eta)):
                exception = NumericalInconsistencyError(f"region membership at eta={eta:.17g}", 1.0, 0.0)
                logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
                raise exception
            checked += 1
        return checked, skipped

    @method_logger("debug")
    def stability_region(self, config: RunConfig) -> CommandResult:
        source = self.resolve_source(config)
        inst = source.instance
        region = stability.stability_region(inst, config.eta_cap, config.tolerances)
        eta_cap = region.eta_cap or stability.default_eta_cap(inst)

        rows = [(i, interval.lo, interval.hi) for i, interval in enumerate(region.intervals)]
        notes = {
            "instance": source.label,
            "eta_unit": source.eta_unit,
            "boundary_roots": " ".join(format_float(r) for r in region.boundary_roots) or "none",
            "critical_roots": " ".join(format_float(r) for r in region.critical_roots) or "none",
            "eta_cap": eta_cap,
        }
        if region.empty_reason:
            notes["empty_reason"] = region.empty_reason
        sample_etas = np.geomspace(1e-3 * source.eta_unit, eta_cap, 8)
        local_stable = stability.local_clock_check(inst, sample_etas)
        notes["local_clock_stable"] = local_stable

        summary = [f"boundary roots: {notes['boundary_roots']}"]
        summary += [f"interval {i}: ({format_float(lo)}, {format_float(hi)})" for i, lo, hi in rows] or ["region is empty"]
        if config.verify_samples:
            checked, skipped = self._verify_region(config, inst, region, eta_cap, source.eta_unit)
            notes["verified_samples"] = checked
            summary.append(f"oracle agreement on {checked} sampled eta ({skipped} near a boundary skipped)")
        summary.append(f"local clock positive stable at every sampled eta: {local_stable}")

        path = self.results_dao.write_csv(self._output(config, f"stability_region_{source.label}.csv"), config, ["interval_index", "lo", "hi"], rows, notes)
        return CommandResult(command=config.command, outputs=[str(path)], summary=summary)

    @method_logger("debug")
    def eta_star(self, config: RunConfig) -> CommandResult:
        source = self.resolve_source(config)
        result = stability.eta_star(source.instance, config.omega_max, config.grid, config.tolerances)
        rows = [(w.omega, w.eta, w.residual) for w in result.witnesses]
        notes = {"instance": source.label, "eta_star": result.eta_star, "omega_min": result.omega_min, "omega_max": result.omega_max, "grid": result.grid}
        path = self.results_dao.write_csv(self._output(config, f"eta_star_{source.label}.csv"), config, ["omega", "eta", "residual"], rows, notes)
        summary = [f"eta* = {format_float(result.eta_star)}"]
        if not result.is_infinite and source.eta_unit != 1.0:
            summary.append(f"eta* / alpha = {format_float(result.eta_star / source.eta_unit)}")
        return CommandResult(command=config.command, outputs=[str(path)], summary=summary)

    @method_logger("debug")
    def eigen_trajectory(self, config: RunConfig) -> CommandResult:
        """eigenvalues of A_eta / eta_unit on a uniform grid of t = eta / eta_unit"""
        source = self.resolve_source(config)
        ratios = np.linspace(config.t_min, config.t_max, config.points)
        trajectory = stability.eigen_trajectory(source.instance, ratios * source.eta_unit, config.tolerances)
        scaled = trajectory.eigenvalues / source.eta_unit

        rows = []
        for k, eta in enumerate(trajectory.etas):
            for i in range(scaled.shape[1]):
                z = scaled[k, i]
                rows.append((float(eta), float(ratios[k]), i, float(z.real), float(z.imag), bool(trajectory.trivial[k, i])))

        summary = []
        for i in trajectory.nontrivial_branches():
            real = scaled[:, i].real
            crossings = [ratios[k] - real[k] * (ratios[k + 1] - ratios[k]) / (real[k + 1] - real[k]) for k in np.flatnonzero(real[:-1] * real[1:] < 0)]
            if crossings:
                summary.append(f"branch {i} crosses Re = 0 at t = " + ", ".join(f"{c:.6g}" for c in crossings))
        notes = {
            "instance": source.label,
            "eta_unit": source.eta_unit,
            "trivial_per_eta": int(trajectory.trivial[0].sum()),
            "ambiguous_steps": int(trajectory.ambiguous.sum()),
        }
        columns = ["eta", "t_ratio", "eig_index", "re", "im", "is_trivial"]
        path = self.results_dao.write_csv(self._output(config, f"eigen_trajectory_{source.label}.csv"), config, columns, rows, notes)
        summary.append(f"{len(rows)} rows over {config.points} grid points")
        return CommandResult(command=config.command, outputs=[str(path)], summary=summary)

    def _write_trajectory(self, config: RunConfig, prefix: str, trajectory: TDTrajectory, notes: dict) -> Path:
        rows = [(c.t, c.norm_v, c.dist_e, c.J_hat, c.diverged) for c in trajectory.checkpoints]
        suffix = f"seed{trajectory.seed}_{trajectory.clock.value}" if trajectory.seed is not None else "expected"
        notes = {**notes, "algorithm": trajectory.algorithm, "clock": trajectory.clock.value, "seed": trajectory.seed, "rng": trajectory.rng}
        return self.results_dao.write_csv(f"{prefix}_{suffix}.csv", config, TRAJECTORY_COLUMNS, rows, notes)

    @method_logger("debug")
    def simulate(self, config: RunConfig) -> CommandResult:
        source = self.resolve_source(config)
        if config.gamma is not None:
            algorithm = DiscountedTD(gamma=config.gamma)
            notes = {"instance": source.label, "gamma": config.gamma}
        else:
            eta = self._eta(config, source, default_ratio=2.0)
            algorithm = DifferentialTD(eta=eta)
            notes = {"instance": source.label, "eta": eta, "eta_ratio": eta / source.eta_unit}
        prefix = self._output(config, f"simulate_{source.label}")
        notes["steps"] = config.steps

        if config.expected_update:
            r_pi = mdp_service.expected_reward_vector(source.mdp, source.policies) if source.mdp is not None else None
            trajectories = [
                td.expected_update_run(
                    source.instance, algorithm, config.schedule, config.steps, r_pi=r_pi, checkpoint_ratio=config.checkpoint_ratio, tolerances=config.tolerances
                )
            ]
        else:
            experiment_mdp, policies = self._experiment_mdp(config, source)
            notes["kappa"] = float(policies.mu[0, 0]) if source.mdp is None else "from file"
            trajectories = td.run_seeds(
                experiment_mdp,
                policies,
                algorithm,
                config.schedule,
                config.steps,
                config.seeds,
                clocks=config.clocks,
                workers=config.workers,
                checkpoint_ratio=config.checkpoint_ratio,
                tolerances=config.tolerances,
                run_id=get_run_id() or "simulate",
            )

        outputs, summary = [], []
        for trajectory in trajectories:
            outputs.append(str(self._write_trajectory(config, prefix, trajectory, notes)))
            label = f"seed {trajectory.seed} {trajectory.clock.value}" if trajectory.seed is not None else "expected update"
            flag = " (diverged)" if trajectory.diverged else ""
            summary.append(f"{label}: dist_e {trajectory.initial.dist_e:.6e} -> {trajectory.final.dist_e:.6e}{flag}")
        return CommandResult(command=config.command, outputs=outputs, summary=summary)

    @method_logger("debug")
    def reproduce(self, config: RunConfig) -> CommandResult:
        """figure data at the configured scale, in <output_dir>/<figure>/, with a gnuplot stub"""
        figure = config.figure or Figure.FIG1
        folder = figure.value
        if figure == Figure.FIG1:
            sub = config.model_copy(
                update={
                    "command": CommandName.EIGEN_TRAJECTORY,
                    "t_min": FIG1_T_MAX / FIG1_POINTS,
                    "t_max": FIG1_T_MAX,
                    "points": FIG1_POINTS,
                    "output": f"{folder}/eigen_trajectory.csv",
                }
            )
            result = self.eigen_trajectory(sub)
            plots = [
                "set multiplot layout 1,2",
                "set xlabel 'Re'; set ylabel 'Im'",
                "plot 'eigen_trajectory.csv' using (column('is_trivial') == 0 ? column('re') : 1/0):'im' with points pt 7 ps 0.3 title 'nontrivial eigenvalues'",
                "set xlabel 't = eta / alpha'; set ylabel 'Re'",
                "plot 'eigen_trajectory.csv' using 't_ratio':(column('is_trivial') == 0 ? column('re') : 1/0) with points pt 7 ps 0.3 title 'real part', 0 with lines notitle",
                "unset multiplot",
            ]
        else:
            seeds = [0] if figure == Figure.FIG2 else APPENDIX_SEEDS
            update = {"command": CommandName.SIMULATE, "seeds": seeds, "output": f"{folder}/simulate", "gamma": None, "expected_update": False}
            if config.eta is None and config.eta_ratio is None:
                update["eta_ratio"] = 2.0
            result = self.simulate(config.model_copy(update=update))
            plots = ["set logscale y", "set xlabel 't'; set ylabel '||v_t||_2'", "set logscale x"]
            clauses = [f"'{Path(output).name}' using 't':'norm_v' with lines title '{Path(output).stem}'" for output in result.outputs]
            plots.append("plot " + ", \\\n     ".join(clauses))

        stub = self.results_dao.write_plot_stub(f"{folder}/{folder}.gp", f"{folder} data ({config.steps} steps)" if figure != Figure.FIG1 else folder, plots)
        return CommandResult(command=config.command, outputs=[*result.outputs, str(stub)], summary=result.summary)

    @method_logger("debug")
    def write_instance(self, config: RunConfig) -> CommandResult:
        """an experiment MDP with --mdp, otherwise the source itself (a family as descriptor unless materialized)"""
        source = self.resolve_source(config)
        if config.mdp:
            experiment_mdp, policies = self._experiment_mdp(config, source)
            path = self.instance_dao.save_mdp(self._output(config, f"{source.label}_mdp.txt"), experiment_mdp, policies)
        elif source.family is not None and not config.materialize:
            path = self.instance_dao.save_family(self._output(config, f"{source.label}.txt"), FamilyDescriptor(m=source.family.m))
        else:
            path = self.instance_dao.save_instance(self._output(config, f"{source.label}.txt"), source.instance)
        return CommandResult(command=config.command, outputs=[str(path)], summary=[f"wrote {path}"])

    @method_logger("debug")
    def lemma_check(self, config: RunConfig) -> CommandResult:
        source = self.resolve_source(config)
        report = stability.lemma_spectrum_check(source.instance, config.tolerances.LEMMA)
        rows = [(i, float(z.real), float(z.imag)) for i, z in enumerate(report.eigenvalues)]
        notes = {
            "instance": source.label,
            "min_real_part": report.min_real_part,
            "worst_disk_margin": report.worst_disk_margin,
            "kernel_modulus": report.kernel_modulus,
            "kernel_vector_alignment": report.kernel_vector_alignment,
        }
        path = self.results_dao.write_csv(self._output(config, f"lemma_check_{source.label}.csv"), config, ["eig_index", "re", "im"], rows, notes)
        summary = [f"{key}: {format_float(value)}" for key, value in notes.items() if key != "instance"]
        return CommandResult(command=config.command, outputs=[str(path)], summary=summary)

    @method_logger("debug")
    def derivative(self, config: RunConfig) -> CommandResult:
        source = self.resolve_source(config)
        closed_form = stability.zero_eig_derivative(source.instance, config.tolerances)
        numeric = stability.finite_difference_derivative(source.instance, config.epsilon)
        relative = abs(numeric - closed_form) / abs(closed_form)
        if relative > 1e-3:
            logger.warning(f"finite-difference slope is {relative:.3e} away from the closed form", extra={"epsilon": config.epsilon})
        rows: List[tuple] = [(closed_form, numeric, relative)]
        columns = ["closed_form", "finite_difference", "relative_error"]
        path = self.results_dao.write_csv(self._output(config, f"derivative_{source.label}.csv"), config, columns, rows, {"instance": source.label, "epsilon": config.epsilon})
        summary = [f"lambda'(0) = {format_float(closed_form)}", f"finite difference = {format_float(numeric)} (relative error {relative:.3e})"]
        return CommandResult(command=config.command, outputs=[str(path)], summary=summary)

    def run(self, config: RunConfig) -> CommandResult:
        handlers = {
            CommandName.STABILITY_REGION: self.stability_region,
            CommandName.ETA_STAR: self.eta_star,
            CommandName.EIGEN_TRAJECTORY: self.eigen_trajectory,
            CommandName.SIMULATE: self.simulate,
            CommandName.REPRODUCE: self.reproduce,
            CommandName.INSTANCE: self.write_instance,
            CommandName.LEMMA_CHECK: self.lemma_check,
            CommandName.DERIVATIVE: self.derivative,
        }
        return handlers[config.command](config)
