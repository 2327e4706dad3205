# Keeps the tests directory on sys.path so the _oracles module resolves.
