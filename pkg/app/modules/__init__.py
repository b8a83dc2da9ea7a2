# Archivo para hacer que modules sea un paquete Python
