"""
Tests for run configuration
"""

import json
from pathlib import Path

import pytest
from pydantic import ValidationError

from localqst.config import RunConfig, load_config_file, resolve_config, set_dotted
from localqst.core import Topology, TopologyKind
from localqst.nn import LossKind
from localqst.pipeline import default_workers


class TestSetDotted:
    def test_creates_levels(self):
        target = {}
        set_dotted(target, "train.epochs", 5)
        set_dotted(target, "seed", 2)
        assert target == {"train": {"epochs": 5}, "seed": 2}

    def test_keeps_siblings(self):
        target = {"train": {"lr": 0.1}}
        set_dotted(target, "train.epochs", 5)
        assert target == {"train": {"lr": 0.1, "epochs": 5}}


class TestRunConfig:
    """Test RunConfig defaults and derived objects"""

    def test_defaults(self):
        cfg = RunConfig()
        assert cfg.topology_model() == Topology.full(4)
        assert str(cfg.layer_spec()) == "66-300-300-66"
        assert cfg.train.loss == LossKind.COSINE
        assert cfg.noise.sigmas == [0.0, 0.01, 0.02, 0.05, 0.1]

    def test_hidden_override(self):
        cfg = RunConfig.model_validate({"train": {"hidden": [32, 16]}})
        assert str(cfg.layer_spec()) == "66-32-16-66"

    def test_train_config(self):
        cfg = RunConfig.model_validate({"seed": 9, "train": {"epochs": 7, "batch_size": 1028}})
        train_config = cfg.train_config()
        assert (train_config.epochs, train_config.batch_size, train_config.seed) == (7, 1028, 9)

    def test_sampling_spec(self):
        cfg = RunConfig(topology=TopologyKind.CHAIN, n_qubits=5)
        assert cfg.sampling_spec().topology == Topology.chain(5)

    def test_unknown_keys_rejected(self):
        with pytest.raises(ValidationError):
            RunConfig.model_validate({"train": {"epoch": 3}})
        with pytest.raises(ValidationError):
            RunConfig.model_validate({"colour": "red"})

    def test_bounds(self):
        with pytest.raises(ValidationError):
            RunConfig.model_validate({"gen": {"count": 0}})
        with pytest.raises(ValidationError):
            RunConfig.model_validate({"workers": 0})

    def test_provenance_omits_workers(self):
        a = RunConfig(workers=1).provenance()
        b = RunConfig(workers=8).provenance()
        assert a == b
        assert "workers" not in a
        json.dumps(a)

    def test_workers_default_to_physical_cores(self):
        assert RunConfig().workers == default_workers()


class TestResolveConfig:
    """Test file loading plus flag overrides"""

    def test_file_then_flags(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"seed": 1, "train": {"epochs": 3, "lr": 0.01}}))
        cfg = resolve_config(path, {"train.epochs": 10, "seed": None})
        assert cfg.seed == 1
        assert cfg.train.epochs == 10
        assert cfg.train.lr == 0.01

    def test_without_file(self):
        cfg = resolve_config(None, {"paths.out": Path("x.jsonl")})
        assert cfg.paths.out == Path("x.jsonl")

    def test_file_must_hold_object(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2]")
        with pytest.raises(ValueError):
            load_config_file(path)

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{seed: 1")
        with pytest.raises(ValueError):
            resolve_config(path, {})

    def test_explicit_fields_are_tracked(self):
        assert "topology" in resolve_config(None, {"topology": TopologyKind.CHAIN}).model_fields_set
        assert "topology" not in resolve_config(None, {"topology": None}).model_fields_set
