"""
localqst CLI - Command line interface
"""

import json
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, NoReturn, Optional, Tuple

import numpy as np
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from . import __version__
from .config import RunConfig, resolve_config
from .core.fidelity import fidelity_f1, fidelity_f2
from .core.hamiltonian import CoeffVector, build_hamiltonian
from .core.states import MeasurementVector, ground_state
from .core.topology import Topology, TopologyKind
from .dataset.generator import DatasetFile, generate_dataset
from .dataset.storage import read_dataset, write_dataset
from .errors import (
    GenerationFailedError,
    LocalQSTError,
    TrainingDivergedError,
)
from .log import configure_logging
from .nn.checkpoint import checkpoint_header, load_checkpoint, save_checkpoint
from .nn.losses import LossKind
from .nn.network import ModelParams, predict
from .nn.trainer import train as train_model
from .pipeline.evaluation import (
    EvalReport,
    evaluate_model,
    evaluate_predictions,
    noise_robustness_eval,
    reconstruct_state,
)
from .pipeline.monitor import ResourceMonitor
from .pipeline.reports import (
    history_frame,
    noise_frame,
    sweep_frame,
    write_csv,
    write_eval_reports,
)
from .pipeline.sweep import SweepGrid, run_sweep

app = typer.Typer(
    name="localqst",
    help="localqst - neural-network tomography of ground states from local measurements",
    add_completion=False,
)
console = Console()


# shared options


def _config_option() -> Any:
    return typer.Option(None, "--config", "-c", help="JSON run configuration file")


def _seed_option() -> Any:
    return typer.Option(None, "--seed", "-s", help="Master seed (unsigned 64-bit)")


def _out_option(help_text: str) -> Any:
    return typer.Option(None, "--out", "-o", help=help_text)


def _workers_option() -> Any:
    return typer.Option(
        None, "--workers", "-w", help="Worker processes [default: physical cores]"
    )


def _verbose_option() -> Any:
    return typer.Option(False, "--verbose", "-v", help="Enable debug logging")


# error handling


def _fail(message: str, code: int) -> NoReturn:
    console.print(f"[red]Error: {message}[/red]")
    raise typer.Exit(code)


@contextmanager
def _cli_errors() -> Iterator[None]:
    """Map exceptions to exit codes: 1 runtime failure, 2 usage or validation"""
    try:
        yield
    except typer.Exit:
        raise
    except KeyboardInterrupt:
        console.print("\n[yellow]Interrupted[/yellow]")
        raise typer.Exit(1)
    except (TrainingDivergedError, GenerationFailedError) as e:
        _fail(str(e), 1)
    except ValidationError as e:
        _fail(f"invalid configuration\n{e}", 2)
    except ValueError as e:
        _fail(str(e), 2)
    except (LocalQSTError, OSError) as e:
        _fail(str(e), 1)


def _setup(
    verbose: bool, config: Optional[Path], overrides: Dict[str, Any]
) -> RunConfig:
    configure_logging(verbose)
    return resolve_config(config, overrides)


def _require(path: Optional[Path], flag: str) -> Path:
    if path is None:
        _fail(f"missing {flag}", 2)
    return path


def _int_list(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    return [int(part) for part in text.split(",") if part.strip()]


def _float_list(text: Optional[str]) -> Optional[List[float]]:
    if text is None:
        return None
    return [float(part) for part in text.split(",") if part.strip()]


def _topology_explicit(cfg: RunConfig) -> bool:
    return bool({"topology", "n_qubits"} & cfg.model_fields_set)


def _read_for(cfg: RunConfig, path: Path, topology: Optional[Topology] = None) -> DatasetFile:
    """Read a dataset; an explicitly configured topology must match the file"""
    if topology is None and _topology_explicit(cfg):
        topology = cfg.topology_model()
    return read_dataset(path, topology=topology)


def _with_topology(cfg: RunConfig, topology: Topology) -> RunConfig:
    return cfg.model_copy(update={"topology": topology.kind, "n_qubits": topology.n_qubits})


def _load_model(path: Path, cfg: RunConfig) -> Tuple[ModelParams, Topology]:
    params, spec = load_checkpoint(path)
    descriptor = checkpoint_header(path).get("metadata", {}).get("topology")
    topology = Topology.from_descriptor(descriptor) if descriptor else cfg.topology_model()
    spec.check_topology(topology)
    return params, topology


def _print_stats(report: EvalReport, title: str) -> None:
    table = Table(title=title)
    table.add_column("")
    for column in ("Max", "Min", "Standard Deviation", "Average Fidelity"):
        table.add_column(column, justify="right")
    for name, stats in (("f1", report.f1), ("f2", report.f2)):
        table.add_row(
            name, f"{stats.max:.4f}", f"{stats.min:.4f}", f"{stats.std:.3e}", f"{stats.mean:.4f}"
        )
    console.print(table)
    console.print(report.summary_line())


@app.command()
def gen(
    topology: Optional[TopologyKind] = typer.Option(None, "--topology", "-t", help="Interaction graph"),
    n_qubits: Optional[int] = typer.Option(None, "--n-qubits", "-n", help="Number of qubits"),
    count: Optional[int] = typer.Option(None, "--count", help="Number of records"),
    config: Optional[Path] = _config_option(),
    seed: Optional[int] = _seed_option(),
    out: Optional[Path] = _out_option("Dataset file (JSON lines)"),
    workers: Optional[int] = _workers_option(),
    verbose: bool = _verbose_option(),
):
    """Generate random Hamiltonians, their ground states and local measurements"""
    with _cli_errors():
        cfg = _setup(
            verbose,
            config,
            {
                "topology": topology,
                "n_qubits": n_qubits,
                "gen.count": count,
                "seed": seed,
                "paths.out": out,
                "workers": workers,
            },
        )
        path = _require(cfg.paths.out, "--out")
        spec = cfg.sampling_spec()
        with ResourceMonitor() as monitor:
            dataset = generate_dataset(
                spec, cfg.gen.count, cfg.seed, workers=cfg.workers, run_config=cfg.provenance()
            )
            write_dataset(dataset, path)
        mean_gap = float(np.mean([record.gap for record in dataset.records]))
        console.print(
            f"[bold green]Generated {dataset.count} records[/bold green] "
            f"({spec.topology}, {spec.topology.measurement_dim} measurements each)"
        )
        console.print(f"mean gap {mean_gap:.4f}, {monitor}")
        console.print(f"Written to {path}")


@app.command()
def train(
    data: Optional[Path] = typer.Option(None, "--data", "-d", help="Training dataset"),
    epochs: Optional[int] = typer.Option(None, "--epochs", "-e", help="Training epochs"),
    batch_size: Optional[int] = typer.Option(None, "--batch", "-b", help="Minibatch size"),
    lr: Optional[float] = typer.Option(None, "--lr", help="Adam learning rate"),
    hidden: Optional[str] = typer.Option(None, "--hidden", help="Hidden widths, e.g. 300,300"),
    loss: Optional[LossKind] = typer.Option(None, "--loss", help="Regression loss"),
    validation_fraction: Optional[float] = typer.Option(
        None, "--validation-fraction", help="Share of records held out per epoch"
    ),
    input_noise: Optional[float] = typer.Option(
        None, "--input-noise", help="Gaussian sigma added to training inputs"
    ),
    history: Optional[Path] = typer.Option(None, "--history", help="History CSV path"),
    config: Optional[Path] = _config_option(),
    seed: Optional[int] = _seed_option(),
    out: Optional[Path] = _out_option("Checkpoint file"),
    workers: Optional[int] = _workers_option(),
    verbose: bool = _verbose_option(),
):
    """Train the measurement-to-Hamiltonian network"""
    with _cli_errors():
        cfg = _setup(
            verbose,
            config,
            {
                "paths.data": data,
                "paths.out": out,
                "train.epochs": epochs,
                "train.batch_size": batch_size,
                "train.lr": lr,
                "train.hidden": _int_list(hidden),
                "train.loss": loss,
                "train.validation_fraction": validation_fraction,
                "train.input_noise": input_noise,
                "seed": seed,
                "workers": workers,
            },
        )
        data_path = _require(cfg.paths.data, "--data")
        out_path = _require(cfg.paths.out, "--out")
        dataset = _read_for(cfg, data_path)
        cfg = _with_topology(cfg, dataset.topology)
        train_config = cfg.train_config()
        console.print(
            f"Training {train_config.layer_spec} on {dataset.count} records "
            f"({train_config.epochs} epochs, batch {train_config.batch_size}, lr {train_config.lr})"
        )

        with ResourceMonitor() as monitor:
            params, epoch_history = train_model(dataset.records, train_config)

        save_checkpoint(
            params,
            train_config.layer_spec,
            out_path,
            seed=cfg.seed,
            metadata={
                "topology": dataset.topology.descriptor(),
                "dataset_master_seed": dataset.master_seed,
                "n_records": dataset.count,
                "final_train_loss": epoch_history[-1].train_loss,
                "run_config": cfg.provenance(),
            },
        )
        history_path = history or out_path.with_suffix(".history.csv")
        write_csv(history_frame(epoch_history), history_path, cfg.provenance())

        last = epoch_history[-1]
        val = "n/a" if last.val_loss is None else f"{last.val_loss:.6f}"
        console.print(
            f"[bold green]Done[/bold green]: train loss {last.train_loss:.6f}, val loss {val}"
        )
        console.print(f"{monitor}")
        console.print(f"Checkpoint written to {out_path}, history to {history_path}")


@app.command(name="eval")
def eval_cmd(
    model: Optional[Path] = typer.Option(None, "--model", "-m", help="Checkpoint file"),
    data: Optional[Path] = typer.Option(None, "--data", "-d", help="Test dataset"),
    oracle: bool = typer.Option(
        False, "--oracle", help="Use the stored true coefficients as predictions"
    ),
    gap_tol: Optional[float] = typer.Option(None, "--gap-tol", help="Degeneracy threshold"),
    config: Optional[Path] = _config_option(),
    seed: Optional[int] = _seed_option(),
    out: Optional[Path] = _out_option("Report directory (records.csv, summary.json)"),
    workers: Optional[int] = _workers_option(),
    verbose: bool = _verbose_option(),
):
    """Evaluate reconstruction fidelities on a test set"""
    with _cli_errors():
        cfg = _setup(
            verbose,
            config,
            {
                "paths.model": model,
                "paths.data": data,
                "paths.out": out,
                "eval.oracle": True if oracle else None,
                "eval.gap_tol": gap_tol,
                "seed": seed,
                "workers": workers,
            },
        )
        data_path = _require(cfg.paths.data, "--data")
        out_dir = _require(cfg.paths.out, "--out")

        with ResourceMonitor() as monitor:
            if cfg.eval.oracle:
                dataset = _read_for(cfg, data_path)
                if not dataset.count:
                    raise ValueError("test set is empty")
                report = evaluate_predictions(
                    [record.h for record in dataset.records],
                    dataset.records,
                    cfg.eval.gap_tol,
                    cfg.workers,
                )
            else:
                params, topology = _load_model(_require(cfg.paths.model, "--model"), cfg)
                dataset = _read_for(cfg, data_path, topology)
                report = evaluate_model(params, dataset.records, cfg.eval.gap_tol, cfg.workers)
        cfg = _with_topology(cfg, dataset.topology)

        write_eval_reports(
            report, out_dir / "records.csv", out_dir / "summary.json", cfg.provenance()
        )
        _print_stats(report, f"{dataset.topology}, {report.n_records} test records")
        console.print(f"{monitor}")
        console.print(f"Reports written to {out_dir}")


def _parse_prediction_input(text: str) -> Tuple[List[float], Optional[List[float]]]:
    """Measurement list and optional true h from a list, {"m": ...} or a record line"""
    raw = json.loads(text)
    if isinstance(raw, list):
        return raw, None
    if isinstance(raw, dict) and "m" in raw:
        return raw["m"], raw.get("h")
    raise ValueError('input must be a JSON list or an object with an "m" field')


@app.command(name="predict")
def predict_cmd(
    model: Optional[Path] = typer.Option(None, "--model", "-m", help="Checkpoint file"),
    input_path: Optional[Path] = typer.Option(
        None, "--input", "-i", help="Measurement vector JSON"
    ),
    gap_tol: Optional[float] = typer.Option(None, "--gap-tol", help="Degeneracy threshold"),
    config: Optional[Path] = _config_option(),
    seed: Optional[int] = _seed_option(),
    out: Optional[Path] = _out_option("Prediction JSON file"),
    workers: Optional[int] = _workers_option(),
    verbose: bool = _verbose_option(),
):
    """Predict Hamiltonian coefficients and the ground state for one measurement vector"""
    with _cli_errors():
        cfg = _setup(
            verbose,
            config,
            {
                "paths.model": model,
                "paths.input": input_path,
                "paths.out": out,
                "eval.gap_tol": gap_tol,
                "seed": seed,
                "workers": workers,
            },
        )
        model_path = _require(cfg.paths.model, "--model")
        source = _require(cfg.paths.input, "--input")
        out_path = _require(cfg.paths.out, "--out")

        params, topology = _load_model(model_path, cfg)
        cfg = _with_topology(cfg, topology)
        with open(source, encoding="utf-8") as f:
            m_values, h_true = _parse_prediction_input(f.read())
        m = MeasurementVector(topology, m_values)
        h_pred = predict(params, m)
        result = reconstruct_state(h_pred, cfg.eval.gap_tol)

        payload: Dict[str, Any] = {
            "topology": topology.descriptor(),
            "terms": [term.name for term in topology.terms],
            "h_pred": h_pred.values.tolist(),
            "gap": result.gap,
            "degenerate": result.failed,
            "amplitudes": None,
            "run_config": cfg.provenance(),
        }
        if result.state is not None:
            payload["amplitudes"] = {
                "real": result.state.amplitudes.real.tolist(),
                "imag": result.state.amplitudes.imag.tolist(),
            }
        fidelities = None
        if h_true is not None and result.state is not None:
            truth = ground_state(build_hamiltonian(CoeffVector(topology, h_true)), 0.0)
            rho_true = truth.density_matrix()
            rho_nn = result.state.density_matrix()
            fidelities = (fidelity_f1(rho_true, rho_nn), fidelity_f2(rho_true, rho_nn))
            payload["f1"], payload["f2"] = fidelities

        out_path.parent.mkdir(parents=True, exist_ok=True)
        with open(out_path, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=2)
            f.write("\n")

        if result.failed:
            console.print(
                f"[yellow]Predicted Hamiltonian is degenerate (gap {result.gap:.3e}); "
                "no ground state written[/yellow]"
            )
        else:
            console.print(f"predicted gap {result.gap:.6f}")
        if fidelities is not None:
            console.print(f"f1 {fidelities[0]:.6f}, f2 {fidelities[1]:.6f}")
        console.print(f"Prediction written to {out_path}")


@app.command()
def sweep(
    base: Optional[Path] = typer.Option(None, "--base", help="Training pool dataset"),
    test: Optional[Path] = typer.Option(None, "--test", help="Test dataset"),
    sizes: Optional[str] = typer.Option(None, "--sizes", help="Training sizes, e.g. 500,1000"),
    epochs: Optional[str] = typer.Option(None, "--epochs", help="Epoch counts, e.g. 100,300"),
    batches: Optional[str] = typer.Option(None, "--batches", help="Batch sizes, e.g. 512,1028"),
    config: Optional[Path] = _config_option(),
    seed: Optional[int] = _seed_option(),
    out: Optional[Path] = _out_option("Sweep table CSV"),
    workers: Optional[int] = _workers_option(),
    verbose: bool = _verbose_option(),
):
    """Train and evaluate over a grid of sizes, epochs and batch sizes"""
    with _cli_errors():
        cfg = _setup(
            verbose,
            config,
            {
                "paths.data": base,
                "paths.test": test,
                "paths.out": out,
                "sweep.train_sizes": _int_list(sizes),
                "sweep.epochs": _int_list(epochs),
                "sweep.batch_sizes": _int_list(batches),
                "seed": seed,
                "workers": workers,
            },
        )
        base_file = _read_for(cfg, _require(cfg.paths.data, "--base"))
        test_file = _read_for(cfg, _require(cfg.paths.test, "--test"), base_file.topology)
        out_path = _require(cfg.paths.out, "--out")
        cfg = _with_topology(cfg, base_file.topology)

        grid = SweepGrid(
            train_sizes=cfg.sweep.train_sizes,
            epochs=cfg.sweep.epochs,
            batch_sizes=cfg.sweep.batch_sizes,
            sampling=base_file.spec,
            layer_spec=cfg.layer_spec(),
            seed=cfg.seed,
            lr=cfg.train.lr,
            validation_fraction=cfg.train.validation_fraction,
            loss=cfg.train.loss,
        )
        with ResourceMonitor() as monitor:
            table = run_sweep(grid, base_file, test_file, cfg.eval.gap_tol, cfg.workers)

        frame = sweep_frame(table)
        write_csv(frame, out_path, cfg.provenance())

        rich_table = Table(title=f"Mean fidelities, {base_file.topology}")
        for column in frame.columns:
            rich_table.add_column(str(column), justify="right")
        for row in frame.itertuples(index=False):
            rich_table.add_row(
                *(f"{v:.4f}" if isinstance(v, float) else str(v) for v in row)
            )
        console.print(rich_table)
        console.print(f"{len(table)} cells, {monitor}")
        console.print(f"Sweep table written to {out_path}")


@app.command(name="noise-eval")
def noise_eval(
    model: Optional[Path] = typer.Option(None, "--model", "-m", help="Checkpoint file"),
    data: Optional[Path] = typer.Option(None, "--data", "-d", help="Test dataset"),
    sigmas: Optional[str] = typer.Option(None, "--sigmas", help="Noise levels, e.g. 0,0.01,0.05"),
    gap_tol: Optional[float] = typer.Option(None, "--gap-tol", help="Degeneracy threshold"),
    config: Optional[Path] = _config_option(),
    seed: Optional[int] = _seed_option(),
    out: Optional[Path] = _out_option("Noise curve CSV"),
    workers: Optional[int] = _workers_option(),
    verbose: bool = _verbose_option(),
):
    """Fidelity degradation under Gaussian measurement noise"""
    with _cli_errors():
        cfg = _setup(
            verbose,
            config,
            {
                "paths.model": model,
                "paths.data": data,
                "paths.out": out,
                "noise.sigmas": _float_list(sigmas),
                "eval.gap_tol": gap_tol,
                "seed": seed,
                "workers": workers,
            },
        )
        params, topology = _load_model(_require(cfg.paths.model, "--model"), cfg)
        dataset = _read_for(cfg, _require(cfg.paths.data, "--data"), topology)
        out_path = _require(cfg.paths.out, "--out")
        cfg = _with_topology(cfg, topology)

        with ResourceMonitor() as monitor:
            levels = noise_robustness_eval(
                params,
                dataset.records,
                cfg.noise.sigmas,
                cfg.seed,
                cfg.eval.gap_tol,
                cfg.workers,
            )
        frame = noise_frame(levels)
        write_csv(frame, out_path, cfg.provenance())
        for level in levels:
            console.print(
                f"sigma {level.sigma:<8g} f1 {level.report.f1.mean:.4f}  "
                f"f2 {level.report.f2.mean:.4f}  failed {level.report.n_failed}"
            )
        console.print(f"{monitor}")
        console.print(f"Noise curve written to {out_path}")


@app.command()
def version():
    """Show localqst version"""
    console.print(f"localqst version {__version__}")


def main():
    """Main entry point"""
    app()


if __name__ == "__main__":
    main()
