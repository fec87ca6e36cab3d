"""Test cases for settings loading and config files."""

import os
import tempfile
import unittest
from pathlib import Path
from unittest import mock

from src.teamform.common import ConfigError, ParseError
from src.teamform.config import Settings, load_settings, read_config_file
from src.teamform.utils.textformat import parse_value


class TestLoadSettings(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        # keep a developer's .env in the working directory out of these tests
        cwd = os.getcwd()
        os.chdir(self.tmp.name)
        self.addCleanup(os.chdir, cwd)

    def test_defaults(self):
        with mock.patch.dict(os.environ, {}, clear=True):
            self.assertEqual(load_settings(), Settings())

    def test_environment(self):
        """Test that TEAMFORM_* variables override the defaults."""
        env = {"TEAMFORM_SEED": "42", "TEAMFORM_P": "0.5", "TEAMFORM_LOG_LEVEL": "debug"}
        with mock.patch.dict(os.environ, env, clear=True):
            settings = load_settings()
        self.assertEqual((settings.seed, settings.p, settings.log_level), (42, 0.5, "debug"))

    def test_env_file(self):
        path = Path(self.tmp.name) / "lab.env"
        path.write_text("TEAMFORM_WORKERS=3\nTEAMFORM_MAX_ROUNDS=500\n")
        with mock.patch.dict(os.environ, {}, clear=True):
            settings = load_settings(path)
        self.assertEqual((settings.workers, settings.max_rounds), (3, 500))

    def test_overrides_win(self):
        """Test that explicit overrides beat the environment and None overrides are ignored."""
        with mock.patch.dict(os.environ, {"TEAMFORM_SEED": "42"}, clear=True):
            settings = load_settings(overrides={"seed": 7, "q": None})
        self.assertEqual(settings.seed, 7)
        self.assertEqual(settings.q, 1.0)

    def test_bad_values(self):
        with mock.patch.dict(os.environ, {"TEAMFORM_SEED": "seven"}, clear=True):
            with self.assertRaises(ConfigError) as ctx:
                load_settings()
        self.assertEqual(ctx.exception.details["variable"], "TEAMFORM_SEED")
        with mock.patch.dict(os.environ, {"TEAMFORM_Q": "1.5"}, clear=True):
            with self.assertRaises(ConfigError):
                load_settings()

    def test_unknown_override(self):
        with mock.patch.dict(os.environ, {}, clear=True):
            with self.assertRaises(ConfigError):
                load_settings(overrides={"colour": "red"})

    def test_missing_env_file(self):
        """Test that naming a missing .env file is a configuration error."""
        with self.assertRaises(ConfigError):
            load_settings("missing.env")

    def test_settings_validation(self):
        for kwargs in ({"workers": 0}, {"log_level": "chatty"}, {"enumeration_limit": 0}, {"max_rounds": -1}):
            with self.subTest(**kwargs), self.assertRaises(ConfigError):
                Settings(**kwargs)


class TestConfigFile(unittest.TestCase):
    def test_values(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "run.conf"
            path.write_text(
                "# sweep\nseed = 3\nrho = 0.2\neps = 0.9, 0.5\npairs = 10:20,20:40\nkind = fig5_random_sweep\n"
            )
            values = read_config_file(path)
        self.assertEqual(
            values,
            {"seed": 3, "rho": 0.2, "eps": [0.9, 0.5], "pairs": [(10, 20), (20, 40)], "kind": "fig5_random_sweep"},
        )

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            read_config_file("/nonexistent/teamform.conf")

    def test_malformed_lines(self):
        """Test that duplicate keys and lines without = report their line."""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "bad.conf"
            path.write_text("seed = 1\nseed = 2\n")
            with self.assertRaises(ParseError) as ctx:
                read_config_file(path)
            self.assertEqual(ctx.exception.line, 2)
            path.write_text("seed 1\n")
            with self.assertRaises(ParseError):
                read_config_file(path)

    def test_undecodable_line(self):
        """Test that a non-UTF-8 line is a ParseError carrying its line number."""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "bad.conf"
            path.write_bytes(b"seed = 1\n# caf\xe9\n")
            with self.assertRaises(ParseError) as ctx:
                read_config_file(path)
        self.assertEqual(ctx.exception.line, 2)

    def test_value_syntax(self):
        """Test booleans, integer lists and n:m pairs."""
        self.assertEqual(parse_value("true", 1), True)
        self.assertEqual(parse_value("2, 4, 6", 1), [2, 4, 6])
        self.assertEqual(parse_value("100:200", 1), [(100, 200)])
        with self.assertRaises(ParseError):
            parse_value("1, x", 1)


if __name__ == "__main__":
    unittest.main()
