import unittest
import sys
import os
import io
import json
import tempfile
from unittest.mock import patch
from absl import flags

# Add the project root to the Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__),
                                                '..')))

from main import main as main_app
from data_models import SurfaceComplex
from fixtures.graphs import path_graph, vertical_torus_graph
from fixtures.octahedron import height_octahedron, sphere_octahedron
from mesh_core import check_simple_morse_odd


class TestMainApp(unittest.TestCase):

    def setUp(self):
        # Reset flags before each test
        flags.FLAGS.unparse_flags()
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def _path(self, name):
        return os.path.join(self.tmp.name, name)

    def _write(self, name, text):
        path = self._path(name)
        with open(path, "w", encoding="utf-8") as f_out:
            f_out.write(text)
        return path

    @patch('main.load_dotenv')
    def _run(self, args, mock_load_dotenv, stdin=""):
        test_args = ["main.py"] + args
        with patch('sys.argv', test_args), \
                patch('sys.stdin', io.StringIO(stdin)), \
                patch('sys.stdout', new_callable=io.StringIO) as out, \
                patch('sys.stderr', new_callable=io.StringIO) as err:
            argv = flags.FLAGS(test_args)  # Parse the flags
            code = main_app(argv)
        flags.FLAGS.unparse_flags()
        mock_load_dotenv.assert_called_once()
        return code, out.getvalue(), err.getvalue()

    def test_orbit_dimension_of_realized_tori(self):
        for name, expected in (("vertical-torus", "d = 0"),
                               ("inclined-torus", "d = 1")):
            mesh, graph = self._path(name + ".json"), self._path(name + "_g.json")
            self.assertEqual(self._run(["fixtures", name, "-o", mesh])[0], 0)
            self.assertEqual(self._run(["reeb", mesh, "--output", graph])[0], 0)
            code, out, _ = self._run(["orbit-dim", graph])
            self.assertEqual(code, 0)
            self.assertEqual(out.strip(), expected)

    def test_validate_reports_violations(self):
        mesh = self._write("octahedron.json", height_octahedron().to_json())
        code, out, _ = self._run(["validate", mesh])
        self.assertEqual(code, 1)
        report = json.loads(out)
        self.assertFalse(report["ok"])
        codes = {v["code"] for v in report["violations"]}
        self.assertEqual(codes, {"duplicate_f_values", "zero_f_value"})

    def test_malformed_json_exits_with_two(self):
        path = self._write("broken.json", "not json")
        code, out, err = self._run(["reeb", path])
        self.assertEqual(code, 2)
        self.assertEqual(out, "")
        self.assertEqual(json.loads(err)["kind"], "malformed")

    def test_float_value_is_malformed(self):
        text = height_octahedron().to_json().replace('"1/1"', '1.0', 1)
        code, _, err = self._run(["validate", self._write("float.json", text)])
        self.assertEqual(code, 2)
        self.assertEqual(json.loads(err)["kind"], "malformed")

    def test_missing_file_is_malformed(self):
        code, _, _ = self._run(["reeb", self._path("missing.json")])
        self.assertEqual(code, 2)

    def test_unknown_subcommand(self):
        code, _, err = self._run(["frobnicate", "x"])
        self.assertEqual(code, 1)
        error = json.loads(err)
        self.assertEqual(error["kind"], "validation")
        self.assertIn("Unknown subcommand", error["error"])

    def test_wrong_operand_count(self):
        code, _, err = self._run(["classify", self._path("one.json")])
        self.assertEqual(code, 1)
        self.assertIn("takes 2 operand(s)", json.loads(err)["error"])

    def test_non_generic_mesh_fails_reeb(self):
        mesh = self._write("octahedron.json", height_octahedron().to_json())
        code, out, err = self._run(["reeb", mesh])
        self.assertEqual(code, 1)
        self.assertEqual(out, "")
        error = json.loads(err)["error"]
        self.assertIn("Invalid surface complex", error)
        self.assertIn("duplicate f-value 0", error)

    def test_unknown_triangle_vertex_is_a_validation_error(self):
        document = json.loads(sphere_octahedron().to_json())
        document["triangles"][0] = [0, 5, 99]
        text = json.dumps(document)
        graph = self._write("path.json", path_graph(mass=8).to_json())
        for args in (["reeb", "-"], ["perturb", "-"], ["compat", graph, "-"]):
            code, out, err = self._run(args, stdin=text)
            self.assertEqual(code, 1, args)
            self.assertEqual(out, "")
            error = json.loads(err)
            self.assertEqual(error["kind"], "validation")
            self.assertIn("unknown vertices", error["error"])
        code, out, _ = self._run(["validate", "-"], stdin=text)
        self.assertEqual(code, 1)
        self.assertIn("bad_triangle", {v["code"] for v in json.loads(out)["violations"]})

    def test_non_integer_moment_order_is_malformed(self):
        graph = self._write("path.json", path_graph().to_json())
        code, _, err = self._run(["casimirs", graph, "--k=0,two"])
        self.assertEqual(code, 2)
        self.assertEqual(json.loads(err)["kind"], "malformed")

    def test_perturb_then_validate(self):
        mesh = self._write("octahedron.json", height_octahedron().to_json())
        out_path = self._path("perturbed.json")
        code, _, _ = self._run(["perturb", mesh, "--eps=1/10", "--seed=3",
                                "-o", out_path])
        self.assertEqual(code, 0)
        with open(out_path, encoding="utf-8") as f_in:
            perturbed = SurfaceComplex.from_json(f_in.read())
        self.assertTrue(check_simple_morse_odd(perturbed).passed)
        self.assertEqual(self._run(["validate", out_path])[0], 0)

    def test_casimirs(self):
        graph = self._write("path.json", path_graph().to_json())
        code, out, _ = self._run(["casimirs", graph, "--k=0,2"])
        self.assertEqual(code, 0)
        table = json.loads(out)
        self.assertEqual(table["total"], {"0": "4/1", "2": "4/3"})
        self.assertEqual(table["quotient"], {"0": "2/1", "2": "2/3"})

    def test_circulation_with_basis(self):
        graph = self._write("vertical.json", vertical_torus_graph().to_json())
        code, out, _ = self._run(["circulation", graph, "--basis"])
        self.assertEqual(code, 0)
        document = json.loads(out)
        self.assertEqual(document["dimension"], 0)
        self.assertEqual(document["basis"], [])
        cref = {e["id"]: e["cref"] for e in document["edges"]}
        self.assertEqual(cref, {0: "0/1", 1: "-3/4", 2: "-3/4", 3: "-3/2"})

    def test_inclined_circulation_dimension(self):
        graph = self._path("inclined.json")
        self._run(["fixtures", "inclined-graph", "-o", graph])
        code, out, _ = self._run(["circulation", graph])
        self.assertEqual(code, 0)
        document = json.loads(out)
        self.assertEqual(document["dimension"], 1)
        self.assertNotIn("basis", document)

    def test_classify_graphs(self):
        vertical, inclined = self._path("v.json"), self._path("i.json")
        self._run(["fixtures", "vertical-graph", "-o", vertical])
        self._run(["fixtures", "inclined-graph", "-o", inclined])
        code, out, _ = self._run(["classify", vertical, inclined, "--k=0,2"])
        self.assertEqual(code, 0)
        document = json.loads(out)
        self.assertFalse(document["isomorphic"])
        first, second = document["reports"]
        self.assertEqual(set(first), {"invariants", "d", "casimirs", "iso"})
        self.assertEqual(set(second), {"invariants", "d", "casimirs"})
        self.assertEqual((first["d"], second["d"]), (0, 1))
        self.assertEqual((first["invariants"]["fix"],
                          second["invariants"]["fix"]), (0, 2))
        self.assertEqual(first["casimirs"]["orders"], [0, 2])
        self.assertFalse(first["iso"]["second"]["isomorphic"])
        code, out, _ = self._run(["classify", vertical, vertical, "--tol=1/100"])
        self.assertTrue(json.loads(out)["isomorphic"])

    def test_compat_mismatch_exits_with_one(self):
        graph = self._write("path.json", path_graph().to_json())
        mesh = self._path("torus.json")
        self._run(["fixtures", "vertical-torus", "-o", mesh])
        code, out, _ = self._run(["compat", graph, mesh])
        self.assertEqual(code, 1)
        self.assertFalse(json.loads(out)["ok"])

    def test_export_dot_from_stdin(self):
        code, out, _ = self._run(["export-dot", "-"],
                                 stdin=vertical_torus_graph().to_json())
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith("digraph reeb {"))
        self.assertIn("style=dashed", self._run(
            ["export-dot", "-"], stdin=path_graph().to_json())[1])

    def test_unknown_fixture(self):
        code, _, err = self._run(["fixtures", "klein-bottle"])
        self.assertEqual(code, 1)
        self.assertIn("Unsupported fixture", json.loads(err)["error"])

    @patch.dict(os.environ, {"REEB_LOG_LEVEL": "chatty"})
    def test_bad_log_level_is_a_validation_error(self):
        code, _, err = self._run(["fixtures", "sphere"])
        self.assertEqual(code, 1)
        self.assertIn("REEB_LOG_LEVEL", json.loads(err)["error"])


if __name__ == '__main__':
    unittest.main()
