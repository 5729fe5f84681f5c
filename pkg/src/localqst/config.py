"""
Run configuration for localqst

A RunConfig is read from a JSON file and then patched with command-line
flags given as dotted keys (``{"train.epochs": 300}``); flags win.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from .core.states import DEFAULT_GAP_TOL
from .core.topology import Topology, TopologyKind
from .dataset.sampling import SamplingSpec
from .nn.losses import LossKind
from .nn.network import LayerSpec
from .nn.trainer import TrainConfig
from .pipeline.monitor import default_workers


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PathsSection(_Section):
    data: Optional[Path] = None
    test: Optional[Path] = None
    model: Optional[Path] = None
    input: Optional[Path] = None
    out: Optional[Path] = None


class GenSection(_Section):
    count: int = Field(default=1000, ge=1)
    mean_range: Tuple[float, float] = (-1.0, 1.0)
    std_range: Tuple[float, float] = (0.5, 1.5)
    gap_tol: float = Field(default=DEFAULT_GAP_TOL, ge=0)
    max_resamples: int = Field(default=16, ge=1)


class TrainSection(_Section):
    epochs: int = Field(default=100, ge=1)
    batch_size: int = Field(default=512, ge=1)
    lr: float = Field(default=1e-3, gt=0)
    hidden: Optional[List[int]] = None
    validation_fraction: float = Field(default=0.2, ge=0, lt=1)
    shuffle_each_epoch: bool = True
    loss: LossKind = LossKind.COSINE
    input_noise: float = Field(default=0.0, ge=0)


class EvalSection(_Section):
    gap_tol: float = Field(default=DEFAULT_GAP_TOL, ge=0)
    oracle: bool = False


class SweepSection(_Section):
    train_sizes: List[int] = Field(default_factory=lambda: [500, 1000, 5000, 10000])
    epochs: List[int] = Field(default_factory=lambda: [100])
    batch_sizes: List[int] = Field(default_factory=lambda: [512])


class NoiseSection(_Section):
    sigmas: List[float] = Field(default_factory=lambda: [0.0, 0.01, 0.02, 0.05, 0.1])


class RunConfig(_Section):
    """Fully resolved parameters of one command invocation"""

    topology: TopologyKind = TopologyKind.FULL
    n_qubits: int = Field(default=4, ge=1)
    seed: int = Field(default=0, ge=0)
    workers: int = Field(default_factory=default_workers, ge=1)
    paths: PathsSection = Field(default_factory=PathsSection)
    gen: GenSection = Field(default_factory=GenSection)
    train: TrainSection = Field(default_factory=TrainSection)
    eval: EvalSection = Field(default_factory=EvalSection)
    sweep: SweepSection = Field(default_factory=SweepSection)
    noise: NoiseSection = Field(default_factory=NoiseSection)

    def topology_model(self) -> Topology:
        return Topology(kind=self.topology, n_qubits=self.n_qubits)

    def sampling_spec(self) -> SamplingSpec:
        return SamplingSpec(
            topology=self.topology_model(),
            mean_range=self.gen.mean_range,
            std_range=self.gen.std_range,
            gap_tol=self.gen.gap_tol,
            max_resamples=self.gen.max_resamples,
        )

    def layer_spec(self) -> LayerSpec:
        topology = self.topology_model()
        if self.train.hidden is None:
            return LayerSpec.for_topology(topology)
        return LayerSpec.with_hidden(topology, self.train.hidden)

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            layer_spec=self.layer_spec(),
            epochs=self.train.epochs,
            batch_size=self.train.batch_size,
            lr=self.train.lr,
            seed=self.seed,
            shuffle_each_epoch=self.train.shuffle_each_epoch,
            validation_fraction=self.train.validation_fraction,
            loss=self.train.loss,
            input_noise=self.train.input_noise,
        )

    def provenance(self) -> Dict[str, Any]:
        """JSON form embedded in artifacts; worker count never changes results"""
        return self.model_dump(mode="json", exclude={"workers"})


def set_dotted(target: Dict[str, Any], key: str, value: Any) -> None:
    """Set ``target["a"]["b"] = value`` for key "a.b", creating levels as needed"""
    *parents, leaf = key.split(".")
    node = target
    for part in parents:
        child = node.get(part)
        if not isinstance(child, dict):
            child = {}
            node[part] = child
        node = child
    node[leaf] = value


def load_config_file(path: Optional[Path]) -> Dict[str, Any]:
    """Raw JSON object from ``path``; an absent path means an empty config"""
    if path is None:
        return {}
    with open(path, encoding="utf-8") as f:
        raw = json.load(f)
    if not isinstance(raw, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    return raw


def resolve_config(
    path: Optional[Path], overrides: Mapping[str, Any]
) -> RunConfig:
    """File values, then flag overrides that were actually given"""
    raw = load_config_file(path)
    for key, value in overrides.items():
        if value is not None:
            set_dotted(raw, key, value)
    return RunConfig.model_validate(raw)
