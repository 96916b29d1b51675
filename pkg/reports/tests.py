# reports/tests.py
import json
import os
import tempfile
from io import StringIO
from unittest.mock import patch

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from arith.ratfun import RatFun
from atlas.diagonalize import diagonalize
from bf.services import bf_direct_sum, change_frames, model_bf, wedge_bwd, wedge_fwd
from geniso.services import from_matrix
from lattices.bases import FIELD
from lattices.matrices import MatK
from strata.services import orbit_representative, stratum_patterns

from .models import AnalysisRun, document_digest
from .sampling import InstanceSampler
from .selftest import admissible_diagonalizable, rank_splits, run_suite, splits_over_blocks, strata_round_trip
from .serializers import DecomposeRequestSerializer, GenIsoSerializer, MatrixInputSerializer

T = RatFun.t()

IDENTITY = {"n": 2, "entries": [["1", "0"], ["0", "1"]]}
DIAGONAL = {"n": 2, "entries": [["t^-1", "0"], ["0", "t^2"]]}
WORKED = MatK([[1, 1], [1, 1 + T]])


class CommandTestMixin:
    """Writes documents to a temporary directory and runs commands on them."""

    def setUp(self):
        super().setUp()
        directory = tempfile.TemporaryDirectory()
        self.addCleanup(directory.cleanup)
        self.directory = directory.name

    def write(self, document, name="input.json", raw=None):
        path = os.path.join(self.directory, name)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(raw if raw is not None else json.dumps(document))
        return path

    def run_command(self, command, document=None, *args, raw=None):
        out, err = StringIO(), StringIO()
        path = self.write(document, raw=raw)
        call_command(command, "--input", path, *args, stdout=out, stderr=err)
        return json.loads(out.getvalue())

    def assertExitCode(self, code, command, document=None, *args, raw=None):
        out, err = StringIO(), StringIO()
        path = self.write(document, raw=raw)
        with self.assertRaises(CommandError) as ctx:
            call_command(command, "--input", path, *args, stdout=out, stderr=err)
        self.assertEqual(ctx.exception.returncode, code)
        return ctx.exception, out.getvalue()


# ---------------------------------------------------------------
# Serializers
# ---------------------------------------------------------------
class MatrixInputSerializerTests(SimpleTestCase):

    def test_valid_matrix(self):
        serializer = MatrixInputSerializer(data=DIAGONAL)
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.save(), MatK.diag([RatFun.monomial(-1), RatFun.monomial(2)]))

    def test_syntax_error_has_position(self):
        serializer = MatrixInputSerializer(data={"n": 1, "entries": [["t^^2"]]})
        self.assertFalse(serializer.is_valid())
        self.assertIn("position", json.dumps(serializer.errors))

    def test_floats_are_refused(self):
        serializer = MatrixInputSerializer(data={"n": 1, "entries": [[0.5]]})
        self.assertFalse(serializer.is_valid())

    def test_shape_must_match_n(self):
        serializer = MatrixInputSerializer(data={"n": 2, "entries": [["1"]]})
        self.assertFalse(serializer.is_valid())
        self.assertIn("entries", serializer.errors)

    def test_singular_matrix(self):
        serializer = MatrixInputSerializer(data={"n": 2, "entries": [["1", "t"], ["1", "t"]]})
        self.assertFalse(serializer.is_valid())

    def test_ragged_rows(self):
        serializer = MatrixInputSerializer(data={"n": 2, "entries": [["1", "0"], ["1"]]})
        self.assertFalse(serializer.is_valid())


class GenIsoSerializerTests(SimpleTestCase):

    def test_round_trip(self):
        phi = from_matrix(WORKED)
        data = GenIsoSerializer(phi).data
        self.assertEqual(data["base"], "dvr")
        self.assertEqual(len(data["gs"]), 2)
        serializer = GenIsoSerializer(data=json.loads(json.dumps(data)))
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.save(), phi)

    def test_random_points_round_trip(self):
        sampler = InstanceSampler(seed=71)
        for n in (1, 3):
            phi = from_matrix(sampler.matrix(n))
            serializer = GenIsoSerializer(data=json.loads(json.dumps(GenIsoSerializer(phi).data)))
            self.assertTrue(serializer.is_valid(), serializer.errors)
            self.assertEqual(serializer.save(), phi)

    def test_step_count(self):
        data = dict(GenIsoSerializer(from_matrix(WORKED)).data)
        data["gs"] = data["gs"][:1]
        serializer = GenIsoSerializer(data=data)
        self.assertFalse(serializer.is_valid())
        self.assertIn("gs", serializer.errors)

    def test_field_point_needs_constants(self):
        data = dict(GenIsoSerializer(from_matrix(MatK.diag([T, 1]))).data)
        data["base"] = "field"
        self.assertFalse(GenIsoSerializer(data=data).is_valid())

    def test_field_point(self):
        data = dict(GenIsoSerializer(from_matrix(MatK.identity(2))).data)
        data["base"] = "field"
        serializer = GenIsoSerializer(data=data)
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertIs(serializer.save().base, FIELD)


class DecomposeRequestSerializerTests(SimpleTestCase):

    def test_needs_exactly_one_point(self):
        self.assertFalse(DecomposeRequestSerializer(data={}).is_valid())
        both = dict(IDENTITY, geniso=GenIsoSerializer(from_matrix(MatK.identity(2))).data)
        self.assertFalse(DecomposeRequestSerializer(data=json.loads(json.dumps(both))).is_valid())

    def test_matrix_request(self):
        serializer = DecomposeRequestSerializer(data=dict(DIAGONAL, I=[1], J=[1]))
        self.assertTrue(serializer.is_valid(), serializer.errors)
        phi, I, J = serializer.save()
        self.assertEqual((phi.n, I, J), (2, [1], [1]))


# ---------------------------------------------------------------
# analyze
# ---------------------------------------------------------------
class AnalyzeCommandTests(CommandTestMixin, SimpleTestCase):

    def test_identity(self):
        report = self.run_command("analyze", IDENTITY)
        self.assertEqual(report["smith"]["m"], [0, 0])
        self.assertEqual((report["stratum"]["I"], report["stratum"]["J"]), ([], []))
        self.assertTrue(report["validation"]["passed"])
        self.assertEqual(report["input"], IDENTITY)

    def test_diagonal_example(self):
        report = self.run_command("analyze", DIAGONAL)
        self.assertEqual(report["smith"], {"m": [-1, 2], "a": [0, 0, 1], "b": [0, 0, 2]})
        self.assertEqual(report["sections"], {"mu_val": [0, 1], "lambda_val": [0, 2]})
        self.assertEqual(report["stratum"]["I"], [1])
        self.assertEqual(report["stratum"]["J"], [1])
        self.assertEqual(report["chart"]["stratum"], {"I": [1], "J": [1]})
        self.assertEqual(len(report["pluecker"]["pluecker"]), 6)

    def test_report_feeds_validate(self):
        """The serialized point in the report passes validate_geniso."""
        report = self.run_command("analyze", DIAGONAL)
        validation = self.run_command("validate_geniso", report["geniso"])
        self.assertTrue(validation["validation"]["passed"])

    def test_deterministic(self):
        path = self.write(DIAGONAL)
        outputs = []
        for _ in range(2):
            out = StringIO()
            call_command("analyze", "--input", path, "--pretty", stdout=out, stderr=StringIO())
            outputs.append(out.getvalue())
        self.assertEqual(outputs[0], outputs[1])

    def test_malformed_entry(self):
        error, _ = self.assertExitCode(1, "analyze", {"n": 1, "entries": [["t^^2"]]})
        self.assertIn("position", str(error))

    def test_missing_file(self):
        with self.assertRaises(CommandError) as ctx:
            call_command("analyze", "--input", os.path.join(self.directory, "absent.json"), stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 1)


# ---------------------------------------------------------------
# validate_geniso
# ---------------------------------------------------------------
class ValidateCommandTests(CommandTestMixin, SimpleTestCase):

    def setUp(self):
        super().setUp()
        self.document = json.loads(json.dumps(GenIsoSerializer(from_matrix(WORKED)).data))

    def test_serialized_point_passes(self):
        report = self.run_command("validate_geniso", self.document)
        self.assertTrue(report["validation"]["passed"])
        self.assertEqual(report["n"], 2)

    def test_tampered_iso(self):
        self.document["iso"][0][0] = "t"
        _, out = self.assertExitCode(2, "validate_geniso", self.document)
        report = json.loads(out)
        failed = [item["name"] for item in report["validation"]["axioms"] if not item["passed"]]
        self.assertIn("iso-unit", failed)

    def test_truncated_file(self):
        text = json.dumps(self.document)
        self.assertExitCode(1, "validate_geniso", raw=text[: len(text) // 2])


# ---------------------------------------------------------------
# decompose
# ---------------------------------------------------------------
class DecomposeCommandTests(CommandTestMixin, SimpleTestCase):

    def test_interior_point(self):
        report = self.run_command("decompose", IDENTITY)
        decomposition = report["decomposition"]
        self.assertEqual((decomposition["phis"], decomposition["psis"]), ([], []))
        self.assertEqual(decomposition["core"]["n"], 2)
        self.assertEqual(report["stratum"], {"I": [], "J": []})

    def test_diagonal_closed_fibre(self):
        report = self.run_command("decompose", DIAGONAL)
        decomposition = report["decomposition"]
        self.assertEqual([cc["n"] for cc in decomposition["phis"]], [1])
        self.assertEqual([cc["n"] for cc in decomposition["psis"]], [1])
        self.assertEqual(decomposition["core"]["n"], 0)
        self.assertEqual(decomposition["e_flag"]["type"], [0, 1, 1, 2])

    def test_serialized_point(self):
        document = {"geniso": GenIsoSerializer(from_matrix(WORKED)).data}
        report = self.run_command("decompose", json.loads(json.dumps(document)))
        self.assertEqual(report["decomposition"]["n"], 2)

    def test_inconsistent_declaration(self):
        _, out = self.assertExitCode(2, "decompose", dict(DIAGONAL, I=[], J=[1]))
        self.assertEqual(json.loads(out)["error"], "InvalidStratumData")

    def test_no_point(self):
        self.assertExitCode(1, "decompose", {"I": [1]})


# ---------------------------------------------------------------
# History
# ---------------------------------------------------------------
class AnalysisRunTests(CommandTestMixin, TestCase):

    def test_save_records_run(self):
        self.run_command("analyze", IDENTITY, "--save")
        run = AnalysisRun.objects.get()
        self.assertEqual(run.command, "analyze")
        self.assertEqual(run.exit_code, 0)
        self.assertTrue(run.passed)
        self.assertEqual(run.input_digest, document_digest(IDENTITY))
        self.assertEqual(list(AnalysisRun.objects.for_document(IDENTITY)), [run])

    def test_failed_run_is_recorded(self):
        document = json.loads(json.dumps(GenIsoSerializer(from_matrix(WORKED)).data))
        document["iso"][0][0] = "t"
        self.assertExitCode(2, "validate_geniso", document, "--save")
        run = AnalysisRun.objects.get()
        self.assertEqual(run.exit_code, 2)
        self.assertFalse(run.report["validation"]["passed"])

    def test_digest_ignores_key_order(self):
        self.assertEqual(document_digest({"n": 1, "entries": []}), document_digest({"entries": [], "n": 1}))


# ---------------------------------------------------------------
# selftest
# ---------------------------------------------------------------
class SelftestTests(SimpleTestCase):

    def test_suite_passes(self):
        results = run_suite(seed=1, count=2, only={"smith-oracle", "construction-validity", "strata-round-trip"})
        self.assertEqual([r.name for r in results], ["smith-oracle", "construction-validity", "strata-round-trip"])
        self.assertTrue(all(r.passed for r in results))
        self.assertTrue(all(r.checked == 2 for r in results))

    def test_same_seed_same_summary(self):
        first = [r.as_dict() for r in run_suite(seed=4, count=2, only={"ldu-identity", "action-invariance"})]
        second = [r.as_dict() for r in run_suite(seed=4, count=2, only={"ldu-identity", "action-invariance"})]
        self.assertEqual(first, second)

    def test_command_output(self):
        out = StringIO()
        call_command(
            "selftest", "--seed", "3", "--count", "1", "--only", "grassmann-equivariance",
            stdout=out, stderr=StringIO(),
        )
        summary = json.loads(out.getvalue())
        self.assertTrue(summary["passed"])
        self.assertEqual(summary["seed"], 3)
        self.assertEqual([p["name"] for p in summary["properties"]], ["grassmann-equivariance"])

    @patch("reports.selftest.PROPERTIES", [("broken", lambda sampler, n: "always fails", (2,))])
    def test_failing_property(self):
        with self.assertRaises(CommandError) as ctx:
            call_command("selftest", "--count", "2", stdout=StringIO(), stderr=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)

    def test_round_trip_visits_every_pattern(self):
        with patch("reports.selftest.orbit_representative", wraps=orbit_representative) as representative:
            self.assertIsNone(strata_round_trip(InstanceSampler(seed=2), 3))
        seen = {(tuple(c.args[1]), tuple(c.args[2])) for c in representative.call_args_list}
        self.assertEqual(seen, {(tuple(I), tuple(J)) for I, J in stratum_patterns(3)})

    def test_admissibility_check_at_dimension_three(self):
        with patch("reports.selftest.diagonalize", wraps=diagonalize) as diag:
            self.assertIsNone(admissible_diagonalizable(InstanceSampler(seed=6), 3))
        # two calls for the greedy pair, then one per (alpha, beta)
        self.assertEqual(diag.call_count, 2 + 36)

    def test_rank_splits(self):
        self.assertEqual(rank_splits((2, 2), (1, 1)), [(0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2)])
        self.assertNotIn((2, 0), rank_splits((2, 2), (1, 1)))

    def test_direct_sum_wedges_split_over_blocks(self):
        sampler = InstanceSampler(seed=8)
        section = T * (1 + T)
        sizes, ranks = (2, 3), (1, 2)
        first, second = (
            change_frames(model_bf(size, rank, section), sampler.unimodular(size), sampler.unimodular(size))
            for size, rank in zip(sizes, ranks)
        )
        total = bf_direct_sum(first, second)
        for k1, k2 in rank_splits(sizes, ranks):
            with self.subTest(wedge="fwd", k1=k1, k2=k2):
                self.assertTrue(splits_over_blocks(wedge_fwd, total, first, second, k1, k2))
        for k1, k2 in rank_splits(sizes, (1, 1)):
            with self.subTest(wedge="bwd", k1=k1, k2=k2):
                self.assertTrue(splits_over_blocks(wedge_bwd, total, first, second, k1, k2))
