"""
Unit tests for config.py
"""

import os
import unittest
from unittest.mock import patch

import config


class TestWorkerCount(unittest.TestCase):
    """Tests for worker_count."""

    def test_environment_override(self):
        with patch.dict(os.environ, {config.THREADS_ENV_VAR: "3"}):
            self.assertEqual(config.worker_count(), 3)

    def test_falls_back_to_cpu_count(self):
        env = {k: v for k, v in os.environ.items() if k != config.THREADS_ENV_VAR}
        with patch.dict(os.environ, env, clear=True), \
                patch("config.psutil.cpu_count", return_value=6):
            self.assertEqual(config.worker_count(), 6)

    def test_invalid_value_is_ignored(self):
        for raw in ("zero", "0", "-2"):
            with patch.dict(os.environ, {config.THREADS_ENV_VAR: raw}), \
                    patch("config.psutil.cpu_count", return_value=2):
                with self.assertLogs("config", level="WARNING"):
                    self.assertEqual(config.worker_count(), 2)

    def test_unknown_cpu_count(self):
        with patch.dict(os.environ, {config.THREADS_ENV_VAR: ""}), \
                patch("config.psutil.cpu_count", return_value=None):
            self.assertEqual(config.worker_count(), 1)


if __name__ == "__main__":
    unittest.main()
