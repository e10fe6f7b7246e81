"""Independent reference computations used to freeze test fixture values.

Each module here recomputes expected values for one fixture family with
deliberately naive code (list.count loops, explicit dot products, flat
stdlib parsers) that shares no logic with the package implementation.
Run any module as a script to reprint the frozen values embedded in the
test files, e.g.:

    python tests/oracles/vector_fixtures.py
"""
