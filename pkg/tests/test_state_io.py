import json
import os
import tempfile
import unittest

import numpy as np

from cli.state_io import avector_to_json, load_avector, load_state, state_to_json, write_json
from core.qstate import embed_A, state_L
from utils.errors import StateFileError


class TestStateFiles(unittest.TestCase):
    def setUp(self):
        self.tmpdir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmpdir.cleanup()

    def _write(self, name, payload):
        path = os.path.join(self.tmpdir.name, name)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(payload if isinstance(payload, str) else json.dumps(payload))
        return path

    def test_state_round_trip(self):
        psi = embed_A(state_L())
        loaded = load_state(self._write("L.json", state_to_json(psi)))
        np.testing.assert_allclose(loaded.amp, psi.amp)

    def test_avector_round_trip(self):
        loaded = load_avector(self._write("z.json", avector_to_json(state_L())))
        np.testing.assert_allclose(loaded.z, state_L().z)

    def test_malformed_json(self):
        """Test un fichier JSON invalide avec diagnostic de position"""
        path = self._write("bad.json", '{"z": [[1, 0],')
        with self.assertRaises(StateFileError) as context:
            load_avector(path)
        self.assertEqual(context.exception.path, path)
        self.assertTrue(context.exception.diagnostics[0].startswith("line 1"))

    def test_wrong_pair_count(self):
        path = self._write("short.json", {"amplitudes": [[1, 0]] * 15})
        with self.assertRaises(StateFileError) as context:
            load_state(path)
        self.assertIn("amplitudes", context.exception.diagnostics[0])

    def test_bad_pair(self):
        with self.assertRaises(StateFileError):
            load_avector(self._write("pair.json", {"z": [[1, 0], [0, 1, 2], [0, 0], [0, 0]]}))

    def test_extra_field_rejected(self):
        with self.assertRaises(StateFileError):
            load_avector(self._write("extra.json", {"z": [[1, 0]] * 4, "note": "x"}))

    def test_missing_file(self):
        with self.assertRaises(FileNotFoundError):
            load_state(os.path.join(self.tmpdir.name, "absent.json"))

    def test_write_json_sorted(self):
        path = os.path.join(self.tmpdir.name, "out.json")
        text = write_json({"b": 1, "a": 2}, path)
        self.assertLess(text.index('"a"'), text.index('"b"'))
        with open(path, encoding="utf-8") as fh:
            self.assertEqual(json.load(fh), {"a": 2, "b": 1})


if __name__ == '__main__':
    unittest.main()
