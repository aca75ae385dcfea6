# This file makes the 'fixtures' directory a Python package.
