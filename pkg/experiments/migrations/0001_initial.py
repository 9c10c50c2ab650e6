# Generated by Django 4.2.6 on 2026-10-18 10:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='ExperimentRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('protocol', models.CharField(max_length=20)),
                ('adversary', models.CharField(default='none', max_length=200)),
                ('config', models.JSONField()),
                ('report', models.JSONField()),
                ('schema_version', models.CharField(max_length=10)),
                ('exit_ok', models.BooleanField(default=False)),
                ('created', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created'],
            },
        ),
    ]
