from ostrunc.cli import main

main()
