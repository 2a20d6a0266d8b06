"""Configuration utilities for the NPCA toolkit."""

import json
import os
import logging
from typing import Dict, Any

logger = logging.getLogger(__name__)

OUT_DIR_ENV = "NPCA_OUT_DIR"


class ConfigManager:
    """Manages application settings from a nested JSON file."""

    def __init__(self, config_path: str = "config/settings.json"):
        self.config_path = config_path
        self.config: Dict[str, Any] = {}
        self.load_config()

    def load_config(self) -> None:
        """Load configuration from JSON file."""
        try:
            if os.path.exists(self.config_path):
                with open(self.config_path, 'r', encoding='utf-8') as f:
                    self.config = json.load(f)
                logger.info(f"Configuration loaded from {self.config_path}")
            else:
                logger.warning(f"Configuration file not found: {self.config_path}")
                self.config = self._get_default_config()
        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"Error loading configuration: {e}")
            self.config = self._get_default_config()

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value by key (supports dot notation)."""
        value = self.config

        try:
            for k in key.split('.'):
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def set(self, key: str, value: Any) -> None:
        """Set configuration value by key (supports dot notation)."""
        keys = key.split('.')
        section = self.config

        for k in keys[:-1]:
            if k not in section:
                section[k] = {}
            section = section[k]

        section[keys[-1]] = value

    def save_config(self) -> None:
        """Save current configuration to file."""
        try:
            directory = os.path.dirname(self.config_path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(self.config_path, 'w', encoding='utf-8') as f:
                json.dump(self.config, f, indent=2)
            logger.info(f"Configuration saved to {self.config_path}")
        except OSError as e:
            logger.error(f"Error saving configuration: {e}")

    def output_dir(self) -> str:
        """Default output directory; the environment variable wins over the file."""
        return os.environ.get(OUT_DIR_ENV) or self.get('output.directory', 'results')

    def _get_default_config(self) -> Dict[str, Any]:
        """Return default configuration values."""
        return {
            "logging": {
                "level": "INFO",
                "file": None
            },
            "output": {
                "directory": "results"
            },
            "hybrid": {
                "thre1": 0.6,
                "k1": 50000
            },
            "sweep": {
                "l_values": [1.8, 2.0, 2.2],
                "replications": 5,
                "grid_step": 0.02,
                "scenario_c_step": 0.05,
                "sim_time_s": 10.0
            },
            "random_occupancy": {
                "period_s": 1.0,
                "n_periods": 200,
                "l": 2.2
            }
        }


# Global configuration instance
config = ConfigManager()
