# reports/services.py
"""The pipelines behind the commands: each returns (report, passed)."""
import logging

from arith.ratfun import INFINITY
from atlas.services import chart_locate, stratum
from geniso.services import from_matrix, matrix_data, validate_gi, valuation_data
from strata.grassmann import grass_point
from strata.services import decompose_stratum

from .serializers import GenIsoSerializer

logger = logging.getLogger(__name__)


def _valuations(values):
    return [None if v == INFINITY else int(v) for v in values]


def _entries(mapping):
    return {",".join(str(i) for i in key): str(value) for key, value in mapping.items()}


def chart_fragment(address, coords, index):
    return {
        **address.as_dict(),
        "t_ratios": [str(x) for x in coords.t_ratios],
        "t_over_t0": [str(x) for x in coords.t_over_t0],
        "y": _entries(coords.y),
        "z": _entries(coords.z),
        "stratum": {"I": sorted(index.I), "J": sorted(index.J)},
    }


def analyze_matrix(matrix, echo):
    """Smith data, sections, admissible pair, chart, stratum and Pluecker vector of the point over ``matrix``."""
    data = matrix_data(matrix)
    logger.info(f"analyze: n={matrix.rows} m={list(data.m)}")
    phi = from_matrix(matrix)
    validation = validate_gi(phi)
    mu_val, lambda_val = valuation_data(phi)
    report = {
        "input": echo,
        "smith": {"m": list(data.m), "a": list(data.a), "b": list(data.b)},
        "sections": {"mu_val": _valuations(mu_val), "lambda_val": _valuations(lambda_val)},
    }
    if not validation.passed:
        report["validation"] = validation.as_dict()
        return report, False

    address, coords, _ = chart_locate(phi)
    index = stratum(phi)
    logger.info(f"analyze: chart {address.as_dict()}")
    report.update({
        "admissible": {"alpha": list(address.alpha), "beta": list(address.beta)},
        "chart": chart_fragment(address, coords, index),
        "stratum": index.as_dict(),
        "pluecker": grass_point(phi).as_dict(),
        "geniso": GenIsoSerializer(phi).data,
        "validation": validation.as_dict(),
    })
    return report, True


def validate_point(phi):
    validation = validate_gi(phi)
    report = {"n": phi.n, "base": phi.base.kind, "validation": validation.as_dict()}
    return report, validation.passed


def decompose_point(phi, I=None, J=None):
    """Decomposition of the closed fibre; raises InvalidStratumData on a wrong declaration or an invalid point."""
    decomposition = decompose_stratum(phi, I, J)
    logger.info(f"decompose: I={list(decomposition.I)} J={list(decomposition.J)}")
    report = {
        "stratum": {"I": list(decomposition.I), "J": list(decomposition.J)},
        "decomposition": decomposition.as_dict(),
        "pluecker": grass_point(phi).as_dict(),
    }
    return report, True
