from setuptools import setup

config = {
    'include_package_data': True,
    'description': 'Finite state machines, recurrent networks and the'
                   ' distances between them',
    'version': '0.1.0.0',
    'packages': ['fsmx', 'fsmx.fsmxutil', 'fsmx.automata', 'fsmx.rnn',
                 'fsmx.training', 'fsmx.extraction', 'fsmx.distances',
                 'fsmx.learning', 'fsmx.bench'],
    'setup_requires': [],
    'install_requires': ['numpy>=1.9', 'matplotlib', 'scipy'],
    'dependency_links': [],
    'scripts': ['scripts/fsmx'],
    'name': 'fsmx'
}

if __name__== '__main__':
    setup(**config)
