"""
Tests for logging defaults
"""

from localqst.log import configure_logging, get_logger


class TestLoggingDefaults:
    """Test the configuration installed on import"""

    def test_debug_is_filtered(self, capsys):
        get_logger("localqst.tests").debug("epoch_finished", epoch=1)
        captured = capsys.readouterr()
        assert "epoch_finished" not in captured.out
        assert "epoch_finished" not in captured.err

    def test_info_goes_to_stderr(self, capsys):
        get_logger("localqst.tests").info("dataset_written", count=3)
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "dataset_written" in captured.err

    def test_verbose_enables_debug(self, capsys):
        configure_logging(verbose=True)
        get_logger("localqst.tests").debug("epoch_finished", epoch=1)
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "epoch_finished" in captured.err
