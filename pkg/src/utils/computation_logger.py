# Provides centralized logging for computations: results, derivation traces and errors as JSON.
import json
import logging
import os
import sys
from datetime import datetime
from typing import Any, Dict, List


class ComputationLogger:
    """Logging front end for the CLI and long-running computations"""

    def __init__(self, config):
        self.config = config
        self.setup_logging()

    def setup_logging(self):
        """Setup logging configuration"""
        handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
        if self.config.log_dir:
            os.makedirs(self.config.log_dir, exist_ok=True)
            handlers.append(logging.FileHandler(os.path.join(self.config.log_dir, 'binoid_hk.log')))

        logging.basicConfig(
            level=getattr(logging, self.config.log_level),
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            handlers=handlers,
        )

        self.logger = logging.getLogger(__name__)

    def _append(self, filename: str, payload: Dict[str, Any]) -> None:
        if not self.config.log_dir:
            return
        with open(os.path.join(self.config.log_dir, filename), 'a') as f:
            f.write(json.dumps(payload, sort_keys=True, default=str) + '\n')

    def log_result(self, kind: str, payload: Dict[str, Any]) -> None:
        """Log a finished computation"""
        record = {
            'timestamp': datetime.now().isoformat(),
            'kind': kind,
            'result': payload,
        }
        self.logger.info(f"RESULT: {json.dumps(record, sort_keys=True, default=str)}")
        self._append('results.log', record)

    def log_trace(self, steps: List[Dict[str, Any]]) -> None:
        """Log the derivation trace of an e_HK computation"""
        for step in steps:
            self.logger.debug(f"TRACE: {json.dumps(step, sort_keys=True)}")

    def log_error(self, error: Exception, context: str = "") -> None:
        """Log errors with context"""
        error_data = {
            'timestamp': datetime.now().isoformat(),
            'error_type': type(error).__name__,
            'error_message': str(error),
            'exit_code': getattr(error, 'exit_code', 1),
            'context': context,
        }

        self.logger.error(f"ERROR: {json.dumps(error_data)}")
        self._append('errors.log', error_data)
