"""
Request Handler for the rsdr command line
Routes a RunConfig to the matching facade method and turns failures into
exit codes.
"""

import logging

import numpy as np
import scipy
import sklearn
from pydantic import ValidationError

from . import __version__
from .csv_io import write_document
from .errors import InputError, NumericalError, ParameterError, RsdrError
from .facade import RsdrFacade
from .outlier import OutlierConfig
from .simulation import MethodSpec, ModelSpec
from .stiefel import OptimizerConfig
from .utils import Parsers

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2

OUTLIER_DIM = 3
OUTLIER_ALPHA = 0.5
SIMULATE_DEFAULTS = {"n": 100, "p": 6, "reps": 30}
ROC_STUDY_DEFAULTS = {"n": 100, "p": 200, "reps": 10}


class RequestHandler:
    """Handles one CLI request"""

    def __init__(self, facade):
        self.facade = facade
        self._methods = {
            "fit": self._handle_fit,
            "cv": self._handle_cv,
            "simulate": self._handle_simulate,
            "outliers": self._handle_outliers,
            "roc": self._handle_roc,
        }

    def handle(self, config):
        """Handle a request and return a response dict"""
        command = config.command
        try:
            if command not in self._methods:
                return self._error_response(command, EXIT_INPUT, "Unknown command: %s" % command)

            result = self._methods[command](config)
            timing = result.pop("timing", {})
            return {"command": command, "result": result, "timing": timing}

        except NumericalError as e:
            return self._error_response(command, EXIT_NUMERICAL, str(e))
        except (InputError, ParameterError, RsdrError, ValidationError) as e:
            return self._error_response(command, EXIT_INPUT, str(e))
        except Exception as e:
            logger.exception("Unexpected failure in %s", command)
            return self._error_response(command, EXIT_NUMERICAL, "%s: %s" % (type(e).__name__, e))

    def _error_response(self, command, code, message):
        """Create an error response"""
        return {"command": command, "error": {"code": code, "message": message}}

    def _optimizer(self, config):
        overrides = {"eta": config.eta, "tol_obj": config.tol, "max_iter": config.max_iter}
        return OptimizerConfig(**{k: v for k, v in overrides.items() if v is not None})

    def _load(self, config):
        return self.facade.load_dataset(
            config.input, Parsers.parse_response(config.response), config.standardize
        )

    def _outlier_alpha(self, config):
        if config.alpha is None:
            return OUTLIER_ALPHA
        alpha = Parsers.parse_alpha(config.alpha)
        if alpha == "cv":
            raise ParameterError("Outlier reducers need a fixed alpha")
        return alpha

    def _handle_fit(self, config):
        """Handle fit request"""
        alpha = Parsers.parse_alpha(config.alpha) if config.alpha is not None else 1.0
        return self.facade.fit(
            self._load(config),
            config.dim,
            alpha,
            self._optimizer(config),
            k_folds=config.folds,
            seed=config.seed,
        )

    def _handle_cv(self, config):
        """Handle cv request; --alpha optionally gives the grid"""
        grid = None
        if config.alpha is not None:
            grid = Parsers.parse_alpha_list(config.alpha)
            if "cv" in grid:
                raise ParameterError("The cross-validation grid must be numeric")
        return self.facade.cross_validate(
            self._load(config),
            config.dim,
            grid,
            self._optimizer(config),
            k_folds=config.folds,
            seed=config.seed,
        )

    def _handle_simulate(self, config):
        """Handle simulate request; --alpha may list several methods"""
        spec = ModelSpec(
            model=config.model,
            predictor_dist=config.dist,
            n=config.n or SIMULATE_DEFAULTS["n"],
            p=config.p or SIMULATE_DEFAULTS["p"],
            contaminated=config.contaminate,
            seed=config.seed,
        )
        optimizer = self._optimizer(config)
        methods = [
            MethodSpec(
                label="rSDR-cv" if alpha == "cv" else "rSDR-%g" % alpha,
                alpha=alpha,
                optimizer=optimizer,
                k_folds=config.folds,
            )
            for alpha in Parsers.parse_alpha_list(config.alpha or "1")
        ]
        return self.facade.simulate(
            spec, methods, config.reps or SIMULATE_DEFAULTS["reps"], table=config.table
        )

    def _handle_outliers(self, config):
        """Handle outliers request"""
        outlier_config = OutlierConfig(
            gamma=config.gamma,
            n_boot=config.boot,
            reducer=config.reducer or "rsdr",
            d=config.dim or OUTLIER_DIM,
            alpha=self._outlier_alpha(config),
            optimizer=self._optimizer(config),
        )
        return self.facade.detect_outliers(self._load(config), outlier_config, seed=config.seed)

    def _handle_roc(self, config):
        """Handle roc request: evaluate --input scores, or run the AR(1) study"""
        if config.input:
            scores, labels = self.facade.load_scores(config.input)
            return self.facade.evaluate_roc(scores, labels, table=config.table)

        d = config.dim or OUTLIER_DIM
        dims = [d - 1, d] if d > 1 else [d]
        reducers = [config.reducer] if config.reducer else ["pca", "rsdr"]
        alpha = self._outlier_alpha(config)
        optimizer = self._optimizer(config)
        configs = []
        for reducer in reducers:
            for k in dims if reducer != "none" else [d]:
                configs.append(OutlierConfig(reducer=reducer, d=k, alpha=alpha, optimizer=optimizer))
        return self.facade.roc_study(
            config.n or ROC_STUDY_DEFAULTS["n"],
            config.p or ROC_STUDY_DEFAULTS["p"],
            config.outliers,
            configs,
            config.reps or ROC_STUDY_DEFAULTS["reps"],
            seed=config.seed,
            table=config.table,
        )


def versions():
    """Package versions recorded in every result document"""
    return {
        "rsdr": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "scikit-learn": sklearn.__version__,
    }


def run(config, facade=None):
    """
    Execute one RunConfig and write its result document.

    Returns:
        Exit code: 0 success, 1 input or parameter error, 2 numerical failure
    """
    facade = facade or RsdrFacade(threads=config.threads)
    response = RequestHandler(facade).handle(config)
    if "error" in response:
        logger.error("%s failed: %s", config.command, response["error"]["message"])
        return response["error"]["code"]

    document = {
        "command": config.command,
        "versions": versions(),
        "seed": config.seed,
        "config": config.echo(),
        "result": response["result"],
    }
    timing = {"wall_clock_s": dict(facade.timings), **response["timing"]}
    try:
        write_document(document, config.output, timing)
    except InputError as e:
        logger.error("%s", e)
        return EXIT_INPUT
    return EXIT_OK
