import io
import json
import os
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from unittest import TestCase

from coxfiber.cli import EXIT_CHECK_FAILED, EXIT_INVALID, EXIT_OK, main
from coxfiber.data import (
    dumps,
    fan_from_dict,
    load_fan,
    load_morphism,
    read_json,
    write_fan,
    write_json,
    write_morphism,
)
from coxfiber.toric.fan import Fan, ToricMorphism, hirzebruch_fibration, projective_line

from tests.test_divclass import torsion_vertical_fibration


class CommandLineTests(TestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.path = self.directory.name

    def tearDown(self):
        self.directory.cleanup()

    def run_main(self, *argv):
        stdout, stderr = io.StringIO(), io.StringIO()
        with redirect_stdout(stdout), redirect_stderr(stderr):
            code = main(list(argv))
        return code, stdout.getvalue(), stderr.getvalue()

    def write_map(self, morphism, name="map.json"):
        path = os.path.join(self.path, name)
        write_morphism(morphism, path)
        return path

    def test_wps_bundle_then_validate(self):
        out = os.path.join(self.path, "bundle")
        code, stdout, _ = self.run_main(
            "wps-bundle", "--weights", "1,1,2", "--v=1,0", "-o", out
        )
        self.assertEqual(code, EXIT_OK)
        self.assertIn("(5 rays)", stdout)
        for name in ("fan.json", "base.json", "morphism.json"):
            self.assertTrue(os.path.exists(os.path.join(out, name)))

        code, stdout, _ = self.run_main("validate", "--json", os.path.join(out, "fan.json"))
        self.assertEqual(code, EXIT_OK)
        data = json.loads(stdout)
        self.assertEqual(data["name"], "P(1,1,2)-bundle[1,0]")
        self.assertEqual((data["rank"], data["rays"], data["max_cones"]), (3, 5, 6))
        self.assertTrue(data["complete"])

        code, stdout, _ = self.run_main(
            "fiber-fan", "--map", os.path.join(out, "morphism.json")
        )
        self.assertEqual(code, EXIT_OK)
        self.assertIn("N0 basis", stdout)

        # Written files survive another trip through the serializer
        fan = load_fan(os.path.join(out, "fan.json"))
        self.assertEqual(fan_from_dict(json.loads(dumps(fan))), fan)
        morphism = load_morphism(os.path.join(out, "morphism.json"))
        again = load_morphism(json.loads(dumps(morphism)))
        self.assertEqual(again.source, morphism.source)
        self.assertEqual(again.target, morphism.target)
        self.assertEqual(again.matrix, morphism.matrix)

    def test_wps_bundle_plane_fibers(self):
        out = os.path.join(self.path, "plane")
        code, stdout, _ = self.run_main(
            "wps-bundle", "--weights", "1,2,2", "--v=0,0", "-o", out
        )
        self.assertEqual(code, EXIT_OK)
        self.assertIn("(5 rays)", stdout)
        fan = load_fan(os.path.join(out, "fan.json"))
        self.assertEqual(fan.rays[2], (-1, -1, 0))

    def test_big_integer_fan(self):
        big = 2 ** 70
        fan = Fan(2, [(big, 1), (0, 1)], [(0, 1)], name="wide")
        path = os.path.join(self.path, "wide.json")
        write_fan(fan, path)
        self.assertEqual(read_json(path)["rays"][0], [str(big), 1])
        self.assertEqual(load_fan(path), fan)
        self.assertEqual(fan_from_dict(json.loads(dumps(fan))), fan)

        code, stdout, _ = self.run_main("validate", "--json", path)
        self.assertEqual(code, EXIT_OK)
        data = json.loads(stdout)
        self.assertEqual((data["rank"], data["rays"], data["complete"]), (2, 2, False))

    def test_validate_invalid_fan(self):
        path = os.path.join(self.path, "fan.json")
        write_json({"rank": 1, "rays": [[2], [-1]], "max_cones": [[0], [1]]}, path)
        code, stdout, _ = self.run_main("validate", path)
        self.assertEqual(code, EXIT_CHECK_FAILED)
        self.assertTrue(stdout.startswith("invalid: NonPrimitiveRay"))

    def test_malformed_input(self):
        path = os.path.join(self.path, "fan.json")
        with open(path, "w") as handle:
            handle.write("[1, 2")
        code, _, stderr = self.run_main("validate", path)
        self.assertEqual(code, EXIT_INVALID)
        self.assertIn("error:", stderr)

        write_json({"rank": 1.5, "rays": [], "max_cones": []}, path)
        self.assertEqual(self.run_main("classgroup", path)[0], EXIT_INVALID)
        self.assertEqual(
            self.run_main("verify-theorem", "--map", os.path.join(self.path, "no.json"))[0],
            EXIT_INVALID,
        )

    def test_usage_errors(self):
        with self.assertRaises(SystemExit) as context:
            self.run_main("verify-theorem")
        self.assertEqual(context.exception.code, 2)
        with self.assertRaises(SystemExit) as context:
            self.run_main("wps-bundle", "--weights", "1,x", "--v=0,0", "-o", self.path)
        self.assertEqual(context.exception.code, 2)
        with self.assertRaises(SystemExit) as context:
            self.run_main()
        self.assertEqual(context.exception.code, 2)

    def test_classgroup(self):
        path = os.path.join(self.path, "f1.json")
        write_json(hirzebruch_fibration(1).source.to_dict(), path)
        code, stdout, _ = self.run_main("classgroup", path)
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(
            stdout.splitlines(),
            ["Cl = Z^2", "D1: [1, 0]", "D2: [0, 1]", "D3: [1, 0]", "D4: [1, 1]"],
        )

    def test_verify_theorem(self):
        path = self.write_map(hirzebruch_fibration(1))
        code, stdout, _ = self.run_main("verify-theorem", "--map", path, "--box", "2", "--json")
        self.assertEqual(code, EXIT_OK)
        report = json.loads(stdout)
        self.assertTrue(report["pass"])
        self.assertEqual(len(report["table"]), 5)
        self.assertEqual(report["degree_zero_dimension"], 1)

        code, stdout, _ = self.run_main("verify-theorem", "--map", path, "--box", "1")
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(stdout.rstrip().endswith("3 degrees, PASS"))

    def test_verify_theorem_failure(self):
        path = self.write_map(ToricMorphism(projective_line(), projective_line(), [[2]]))
        code, stdout, _ = self.run_main("verify-theorem", "--map", path)
        self.assertEqual(code, EXIT_CHECK_FAILED)
        self.assertIn("connected fibers: FAIL (witness [2])", stdout)

    def test_vertical(self):
        code, stdout, _ = self.run_main(
            "vertical", "--map", self.write_map(torsion_vertical_fibration())
        )
        self.assertEqual(code, EXIT_CHECK_FAILED)
        self.assertIn("Cl_pi = Z + Z/2", stdout)

        code, stdout, _ = self.run_main(
            "vertical", "--map", self.write_map(hirzebruch_fibration(2), "f2.json")
        )
        self.assertEqual(code, EXIT_OK)
        self.assertIn("vertical torsion free: PASS", stdout)

    def test_lattices_and_prim1(self):
        path = self.write_map(hirzebruch_fibration(1))
        self.assertEqual(self.run_main("verify-lattices", "--map", path)[0], EXIT_OK)
        code, stdout, _ = self.run_main("prim1-check", "--map", path, "--seed", "2", "--json")
        self.assertEqual(code, EXIT_OK)
        data = json.loads(stdout)
        self.assertEqual(data["seed"], 2)
        self.assertTrue(data["ok"])

    def test_blowup_commands(self):
        path = self.write_map(hirzebruch_fibration(1))
        code, stdout, _ = self.run_main("ledger", "--map", path)
        self.assertEqual(code, EXIT_OK)
        self.assertIn("Cl(X~) = Z^3", stdout)

        code, stdout, _ = self.run_main(
            "certify-nonfg", "--map", path, "--cite", "external result", "--box", "2"
        )
        self.assertEqual(code, EXIT_OK)
        self.assertIn("valid: yes", stdout)

        code, stdout, _ = self.run_main(
            "certify-nonfg", "--map", path, "--cite", "", "--box", "2"
        )
        self.assertEqual(code, EXIT_CHECK_FAILED)
        self.assertIn("external input: FAIL", stdout)
