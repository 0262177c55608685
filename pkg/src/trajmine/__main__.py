from trajmine.cli import run

run()
