# core/tests/test_core.py
import logging

from django.conf import settings
from django.test import SimpleTestCase

from core.exceptions import (
    DivisionByZero,
    ExpressionSyntaxError,
    InvalidStratumData,
    KglError,
    NotASubbundle,
    ZeroPivot,
)
from core.reports import ValidationReport
from strata import services as strata_services


class ExceptionTests(SimpleTestCase):

    def test_hierarchy(self):
        for error in (InvalidStratumData, NotASubbundle, DivisionByZero):
            self.assertTrue(issubclass(error, KglError))
        self.assertTrue(issubclass(DivisionByZero, ZeroDivisionError))

    def test_carried_fields(self):
        error = ExpressionSyntaxError("unexpected token", 4)
        self.assertEqual(error.position, 4)
        self.assertIn("position 4", str(error))
        self.assertEqual(ZeroPivot(2).k, 2)


class ValidationReportTests(SimpleTestCase):

    def test_failures_are_data(self):
        report = ValidationReport(subject="example")
        self.assertTrue(report.check("first", True))
        self.assertFalse(report.check("second", 0, "detail"))
        self.assertFalse(report.passed)
        self.assertEqual([item.name for item in report.failures], ["second"])

    def test_extend_with_prefix(self):
        inner = ValidationReport(subject="inner")
        inner.check("shape", False)
        outer = ValidationReport(subject="outer")
        outer.extend(inner, prefix="g0.")
        self.assertEqual(outer.as_dict()["axioms"][0]["name"], "g0.shape")
        self.assertFalse(outer.as_dict()["passed"])

    def test_empty_report_passes(self):
        self.assertTrue(ValidationReport(subject="nothing").passed)


class SettingsTests(SimpleTestCase):

    def test_every_app_has_a_logger(self):
        for app in ("arith", "lattices", "bf", "geniso", "atlas", "strata", "reports"):
            self.assertIn(app, settings.LOGGING["loggers"])
            self.assertIn(app, settings.INSTALLED_APPS)

    def test_console_logs_to_stderr(self):
        self.assertEqual(settings.LOGGING["handlers"]["console"]["stream"], "ext://sys.stderr")

    def test_tunables(self):
        config = settings.KGLSCOPE
        self.assertEqual((config["MAX_DEGREE"], config["COEFF_RANGE"]), (3, 9))
        self.assertGreater(config["SELFTEST_COUNT"], 0)

    def test_module_loggers_are_named_after_modules(self):
        self.assertEqual(strata_services.logger.name, "strata.services")
        self.assertIsInstance(strata_services.logger, logging.Logger)
