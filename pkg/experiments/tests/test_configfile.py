import os
import tempfile

from django.test import SimpleTestCase

from experiments.configfile import read_config_file
from netsim.exceptions import ConfigError


class ReadConfigFileTest(SimpleTestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.addCleanup(self.directory.cleanup)

    def _write(self, text):
        path = os.path.join(self.directory.name, 'experiment.env')
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write(text)
        return path

    def test_typed_values(self):
        """
        Test that known keys come back with their types.
        """
        path = self._write('protocol=binary\nn=64,128\nepsilon=0.2\nruns=3\nadversary=crash\n')
        values = read_config_file(path)

        # Assert every value was cast
        self.assertEqual(values, {
            'protocol': 'binary', 'n': [64, 128], 'epsilon': 0.2, 'runs': 3, 'adversary': 'crash',
        })

    def test_file_does_not_touch_environment(self):
        path = self._write('round_cap=7\n')
        read_config_file(path)
        self.assertNotIn('round_cap', os.environ)

    def test_errors(self):
        """
        Test that unknown keys, bad values and missing files are configuration errors.
        """
        with self.assertRaises(ConfigError):
            read_config_file(self._write('colour=blue\n'))
        with self.assertRaises(ConfigError):
            read_config_file(self._write('runs=many\n'))
        with self.assertRaises(ConfigError):
            read_config_file(os.path.join(self.directory.name, 'missing.env'))
